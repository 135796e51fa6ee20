"""
Elliptic curves with isomorphic 2N-torsion
==========================================

Tangent lines to the branch cubic cut the double plane in genus one curves.
A rational point on one of them gives a pair of curves that are both
N-congruent and 2-congruent; traces of Frobenius are checked mod 2N.
"""

from ellsurf import moduli as M

tf = M.tangent_fibration("10,1", 2)
print("quartic:", tf.quartic.as_expr())
pts = M.quartic_points(tf, height=12)
print("a few points:", pts[:4])

pair = M.end_to_end_pair("10,1", 2, pts[0][0], bound=300, tf=tf)
print("E1:", [str(c) for c in pair.E1.coeffs])
print("E2:", [str(c) for c in pair.E2.coeffs])
print("checked primes:", pair.evidence.checked[:10], "...", len(pair.evidence.checked))
j1, j2 = pair.j_invariants()
print("2-congruent by the j-invariant test:", M.two_congruence_test(j1, j2))

# scanning T0 by height gives many pairs quickly
for case in ("6,5", "10,3"):
    got = M.first_pairs(case, count=3, bound=200)
    print(case, [p.source["T0"] for p in got])
