"""
An equation with no solution
============================

f(a) = f(a) + 1 mod 2.  The algebra is not antifounded (0 and 1 are
bisimilar) and no total map works, but after collapsing the bisimilarity
classes the quotiented equation has exactly one solution.
"""
from hylocheck import fixture_path, load_instance
from hylocheck.coinductive import (check_coinduction_principle, check_criteria,
                                   compute_quotient, extract_quotient_solution, verify_solution)
from hylocheck.oracle import enumerate_solutions, probe_corecursive

inst = load_instance(fixture_path("modsucc2.json"))
v = check_criteria(inst)
print(v.flags())
print("bisimilar pair:", v.evidence["antifounded"])
print("solutions of the plain equation:", enumerate_solutions(inst).count)

q = compute_quotient(inst)
print("classes:", q.labels)
sol = extract_quotient_solution(inst, q)
print("quotient solution:", sol.named(inst),
      "verified:", verify_solution(inst, sol, "quotiented", q).ok)

# the total relation passes the coinduction premise, which is why
# the principle needs antifoundedness before it concludes equality
r = check_coinduction_principle(inst, [("0", "1"), ("1", "0"), ("0", "0"), ("1", "1")])
print(f"R total: premise {r.premise_holds}, conclusion {r.conclusion_holds}")

# the algebra is not corecursive: the one-element loop has no solution
print("corecursive up to |A| = 2:", bool(probe_corecursive(inst, 2)))
