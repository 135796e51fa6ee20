"""
Hilbert symbols and isotropy over Q
===================================

A quadratic form over Q has a nontrivial zero iff it has one at every
place.  The isotropy test reports a place where it fails.
"""

from fractions import Fraction

from ellsurf.algebra.quadratic import INFINITY, QForm, hilbert_symbol, is_isotropic_over_Q

print("(2,3)_3 =", hilbert_symbol(2, 3, 3), "  (-1,-1)_inf =", hilbert_symbol(-1, -1, INFINITY))

f7 = QForm.binary(7, -12, 18, Fraction(2, 75))
f17 = QForm.binary(139, 76, 316, Fraction(1, 450))
res = is_isotropic_over_Q(f7.orthogonal_difference(f17))
print("f7 - f17 isotropic:", res.isotropic, " obstruction at", res.witness)
