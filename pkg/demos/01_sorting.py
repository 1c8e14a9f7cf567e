"""
Sorting as a hylomorphism
=========================

Insertion sort and quicksort over all lists of length <= n on a small
alphabet.  The coalgebra splits a list, the algebra reassembles, and
wellfoundedness of the splitting is enough for a unique solution.
"""
import json

from hylocheck import fixture_path, load_instance
from hylocheck.inductive import compute_dom, extract_partial_solution, is_wellfounded
from hylocheck.instance import apply_alpha, generate_example

# quicksort on the alphabet {0,1,2}, lists up to length 4: 121 elements
qs = load_instance(fixture_path("qsort_k3n4.json"))
print(qs.summary())

# alpha splits a list around its head, so every argument is shorter
print("alpha([2,0,1,2]) =", apply_alpha(qs, "[2,0,1,2]"))

# every list enters dom, and the rank grows with the length
dom = compute_dom(qs)
print("wellfounded:", bool(is_wellfounded(qs)))
print("max rank:", max(dom.rank.values()))

# the unique solution, read off the least-fixpoint graph
sol = extract_partial_solution(qs).named(qs)
for xs in ("[]", "[1]", "[2,1]", "[2,0,1,2]", "[1,1,0,0]"):
    print(f"  qsort {xs:<10} = {sol[xs]}")
assert all(json.loads(v) == sorted(json.loads(k)) for k, v in sol.items())

# insertion sort, built in memory rather than loaded
isort = generate_example("isort", k=2, n=3)
sol = extract_partial_solution(isort).named(isort)
print("isort [1,0,1] =", sol["[1,0,1]"])
