"""
Certifying Picard numbers
=========================

Lower bound from sections, upper bounds from two good primes, and the
step that closes the gap: comparing discriminants, or a rank four
quadratic form with no rational zero.
"""

import tempfile

from ellsurf.catalog import get_surface
from ellsurf.picard import certify_picard, regulator_form_at

cache = tempfile.mkdtemp()
for name in ("9,1", "10,3"):
    cert = certify_picard(name, cache_dir=cache)
    print(f"({name})  rho = {cert.rho}")
    for step in cert.chain:
        print("   ", step)

# the binary forms behind the last step for (10,3)
e = get_surface("10,3")
for p in (31, 37):
    F = regulator_form_at(e, p)
    print(p, [str(c) for c in F.binary_coefficients()])
