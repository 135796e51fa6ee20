"""
Point counts and the characteristic polynomial of Frobenius
===========================================================

Count points on a surface mod p fibre by fibre, then rebuild f_p from a few
counts plus the part of Frobenius already known from fibres and sections.
"""

import tempfile

from ellsurf.catalog import get_surface, reference_frobenius
from ellsurf.mordell_weil import EllipticSurface
from ellsurf.picard import known_factor
from ellsurf.zeta import CountCache, count_surface, frobenius_polynomial, rho_p_upper

entry = get_surface("12,1")
p = 5
S = EllipticSurface.from_entry(entry, p)

# n_1 and n_2 directly; naive counting for small fields, BSGS above the threshold
for r in (1, 2):
    n, how = count_surface(S.analysis, p, r)
    print(f"n_{r} = {n} ({how})")

# only the unknown part of f_p has to be pinned down by counts
known, rational, conjugate = known_factor(S, entry, p)
print("known factor degree:", known.degree(), "of", S.analysis.b2)

cache = CountCache(tempfile.mkdtemp())
f, counts = frobenius_polynomial(S.analysis, p, known, surface=entry.name, cache=cache)
print("f_5 =", f.to_text(), " sign", f.sign)
print("matches the table row:", f.f.coeffs == reference_frobenius(entry.name, p).coeffs)
print("rho_5 <=", rho_p_upper(f))

# a second call finds everything in the cache
_, again = frobenius_polynomial(S.analysis, p, known, surface=entry.name, cache=cache)
print("counted on the second call:", again.computed)
