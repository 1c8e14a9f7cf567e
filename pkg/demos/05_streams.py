"""
Productive definitions on streams
=================================

Streams are observed through hd and tl.  Definitions are rewrite rules, and
observations are computed by fuel-bounded rewriting.
"""
from hylocheck import fixture_path
from hylocheck.codata import (check_guardedness, load_codata, prefix, productivity_probe,
                              random_smerge_machine, unfold)

# f(s) = cons(hd(s), f(tl(tl(s)))) keeps positions 0, 2, 4, ...
drop = load_codata(fixture_path("dropeven.codata"))
print("dropeven(0,1,2,...):", prefix(drop, "f(arith(0,1))", 8))
print("guarded:", check_guardedness(drop).guarded)

# smerge(x, xs0, xs1) = x : smerge(hd xs0, xs1, tl xs0) against a two-state machine
sm = load_codata(fixture_path("smerge.codata"))
for rule in sm.equation.values():
    print("  ", rule)
print("f(g):", prefix(sm, "f(g)", 8))

# random argument machines are all productive
for seed in range(3):
    sys, table = random_smerge_machine(3, seed)
    cert = productivity_probe(sys, "f(q0)", 16)
    print(f"machine {table}: {prefix(sys, 'f(q0)', 8)} ok={cert.ok}")

# a definition that never produces: the observation runs out of fuel
bad = load_codata(fixture_path("bad_loop.codata"))
print(unfold(bad, "f(arith(0,1))", ["hd"], fuel=1000).value)
print(check_guardedness(bad))
