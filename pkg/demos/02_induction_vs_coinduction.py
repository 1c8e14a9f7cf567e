"""
When induction fails but coinduction succeeds
=============================================

Two instances share the algebra z() -> b0, s(b) -> b1.  In ``tiny`` the
coalgebra is a0 -> z(), a1 -> s(a0).  In ``tiny_loop`` a1 calls itself.
"""
from hylocheck import fixture_path, load_instance
from hylocheck.coinductive import check_criteria, extract_quotient_solution
from hylocheck.inductive import check_induction_principle, extract_partial_solution
from hylocheck.oracle import enumerate_solutions

tiny = load_instance(fixture_path("tiny.json"))
loop = load_instance(fixture_path("tiny_loop.json"))

for inst, name in ((tiny, "tiny"), (loop, "tiny_loop")):
    v = check_criteria(inst)
    print(f"{name}: {v.flags()}  oracle count = {enumerate_solutions(inst).count}")

# the inductive domain of tiny_loop stops at a0
print("inductive solution on tiny_loop:", extract_partial_solution(loop).named(loop))

# the coinductive graph reaches a1 through the self-justifying pair (a1, b1)
print("quotient solution on tiny_loop:", extract_quotient_solution(loop).named(loop))

# the induction principle is unsound without wellfoundedness:
# P = {a0} is closed under the premise but does not cover a1
r = check_induction_principle(loop, {"a0"})
print(f"P = {{a0}}: premise {r.premise_holds}, conclusion {r.conclusion_holds}")
