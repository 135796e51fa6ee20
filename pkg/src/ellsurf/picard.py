"""Certified Picard numbers for the catalogued surfaces.

Lower bound: Shioda-Tate with independent sections over Q-bar.
Upper bounds, tried in order until the two meet:

  * h^{1,1} = 10 chi;
  * rho(X_p-bar) <= deg g_p at a good prime p (roots of unity among the
    normalised Frobenius eigenvalues);
  * two primes with the same even bound and different discriminant square
    classes lower it by one (van Luijk);
  * if that is still not enough, the two rank-2 "missing" regulator forms
    must represent each other, and an anisotropic difference lowers it again.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .algebra.linalg import rank
from .algebra.quadratic import QForm, SquareClass, is_isotropic_over_Q
from .algebra.upoly import UPoly
from .catalog import SurfaceEntry, get_surface
from .kodaira import SCHEMA_VERSION, good_prime_test, shioda_tate_ns_rank, trivial_lattice_charpoly
from .mordell_weil import EllipticSurface, mod_sections, rank_lower_bound
from .zeta import (CountCache, FrobCharPoly, PointCounts, delta_p_bsd, delta_p_kl,
                   frobenius_polynomial, geometric_mw_bound, rho_p_upper)


class CertificationError(RuntimeError):
    pass


@dataclass
class PrimeRecord:
    p: int
    f: FrobCharPoly
    rho_p: int
    delta: SquareClass
    # "frobenius": Delta_p from h_p(1) h_p(-1), valid only if rho_p = deg g_p
    # "regulator": Delta_p from prod c_t * Reg of generators of finite index
    method: str
    assumes_tate: bool
    delta_kl: SquareClass
    delta_bsd: Optional[SquareClass] = None
    counts: Optional[PointCounts] = None
    generators: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"p": self.p, "rho_p_upper": self.rho_p, "delta": str(self.delta),
                "method": self.method, "assumes_rho_p_equals_deg_g": self.assumes_tate,
                "delta_from_f_p": str(self.delta_kl),
                "delta_from_regulator": None if self.delta_bsd is None else str(self.delta_bsd),
                "generators": self.generators, "f_p": self.f.to_dict(),
                "counts": None if self.counts is None else self.counts.to_dict()}


@dataclass
class PicardCertificate:
    surface: str
    lower_bound: int
    hodge_bound: int
    records: list = field(default_factory=list)
    van_luijk_bound: Optional[int] = None
    qform_refinement: Optional[dict] = None
    chain: list = field(default_factory=list)
    rho: Optional[int] = None

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "surface": self.surface,
                "lower_bound": self.lower_bound, "hodge_bound": self.hodge_bound,
                "primes": [r.to_dict() for r in self.records],
                "van_luijk_bound": self.van_luijk_bound,
                "qform_refinement": self.qform_refinement,
                "chain": self.chain, "rho": self.rho}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def known_factor(S: EllipticSurface, entry: SurfaceEntry, p: int):
    """Frobenius on the span of O, fibre components and the sections we know mod p.

    Returns (factor, rational_sections, conjugate_sections, gram) where only
    an independent subset of the sections is kept.
    """
    rational, conjugate = mod_sections(S, entry, p)
    keep = _independent(S, list(rational.values()))
    conj = _independent(S, conjugate)
    signs = [1] * len(keep) + [-1] * len(conj)
    return trivial_lattice_charpoly(S.analysis, signs), keep, conj


def _independent(S: EllipticSurface, secs: list) -> list:
    out: list = []
    for P in secs:
        trial = out + [P]
        if rank(S.gram(trial)) == len(trial):
            out = trial
    return out


def prime_record(entry: SurfaceEntry, p: int, cache: CountCache | None = None,
                 r_max: int = 4, workers: int = 1) -> PrimeRecord:
    a = entry.a_invariants()
    if not good_prime_test(a, p):
        raise CertificationError(f"{p} is not a good prime for {entry.name}")
    S = EllipticSurface.from_entry(entry, p)
    an = S.analysis
    known, keep, conj = known_factor(S, entry, p)
    f, pc = frobenius_polynomial(an, p, known, surface=entry.name, r_max=r_max,
                                 cache=cache, workers=workers)
    if not f.f.divmod(known)[1].is_zero():
        raise CertificationError("known Frobenius factor does not divide f_p")
    rho_p = rho_p_upper(f)
    d_kl = delta_p_kl(f)
    gens = keep + conj
    d_bsd = None
    if len(gens) == geometric_mw_bound(an, rho_p):
        # finite index in E_p(F_p-bar(T)), so no assumption on rho_p is needed
        d_bsd = delta_p_bsd(an, S.gram(gens))
        if d_bsd != d_kl:
            raise CertificationError(f"the two discriminant computations disagree at p = {p}")
    method = "regulator" if d_bsd is not None else "frobenius"
    return PrimeRecord(p, f, rho_p, d_bsd or d_kl, method, d_bsd is None, d_kl, d_bsd, pc,
                       [P.label for P in gens])


def van_luijk(rec_p: PrimeRecord, rec_q: PrimeRecord) -> Optional[int]:
    if rec_p.rho_p != rec_q.rho_p or rec_p.rho_p % 2:
        return None
    if rec_p.delta == rec_q.delta:
        return None
    return rec_p.rho_p - 1


def refine_by_two(form_p: QForm, form_q: QForm, rho_p: int):
    """If form_p - form_q is anisotropic over Q, rho <= rho_p - 2; returns (bound, place)."""
    res = is_isotropic_over_Q(form_p.orthogonal_difference(form_q))
    if res.isotropic:
        return None
    return rho_p - 2, res.witness


def regulator_form_at(entry: SurfaceEntry, p: int) -> QForm:
    S = EllipticSurface.from_entry(entry, p)
    secs, _ = mod_sections(S, entry, p)
    A, B = entry.picard.pencils[p]
    return S.regulator_form([secs[l] for l in entry.picard.fixed], secs[A], secs[B])


def certify_picard(entry, cache_dir: str | None = None, r_max: int = 4,
                   workers: int = 1) -> PicardCertificate:
    if not isinstance(entry, SurfaceEntry):
        entry = get_surface(entry)
    S = EllipticSurface.from_entry(entry)
    an = S.analysis
    lower = shioda_tate_ns_rank(an, rank_lower_bound(S, entry, geometric=True))
    cert = PicardCertificate(entry.name, lower, 10 * an.m)
    upper = cert.hodge_bound
    cert.chain.append({"step": "hodge", "bound": upper})
    cache = CountCache(cache_dir)
    plan = entry.picard
    if upper > lower:
        if len(plan.primes) < 2:
            raise CertificationError(f"no primes configured for {entry.name}")
        for p in plan.primes:
            rec = prime_record(entry, p, cache, r_max, workers)
            cert.records.append(rec)
            cert.chain.append({"step": "rho_p", "p": p, "bound": rec.rho_p})
            upper = min(upper, rec.rho_p)
    if upper > lower:
        r1, r2 = cert.records[:2]
        vl = van_luijk(r1, r2)
        if vl is not None:
            cert.van_luijk_bound = vl
            upper = min(upper, vl)
            cert.chain.append({"step": "van_luijk", "primes": [r1.p, r2.p], "bound": vl,
                               "deltas": [str(r1.delta), str(r2.delta)]})
    if upper > lower and plan.method == "refine_by_two":
        p1, p2 = plan.primes[:2]
        forms = [regulator_form_at(entry, p) for p in (p1, p2)]
        # the two forms only make sense as regulators of the same missing rank-2 piece
        # when both primes give rho_p = upper + 1
        out = refine_by_two(forms[0], forms[1], cert.records[0].rho_p)
        coeffs = [[str(c) for c in F.binary_coefficients()] for F in forms]
        if out is not None:
            bound, place = out
            cert.qform_refinement = {"forms": {str(p1): coeffs[0], str(p2): coeffs[1]},
                                     "anisotropic_at": str(place), "bound": bound}
            upper = min(upper, bound)
            cert.chain.append({"step": "refine_by_two", "bound": bound, "place": str(place)})
    if upper != lower:
        raise CertificationError(f"{entry.name}: bounds {lower} <= rho <= {upper} do not meet")
    cert.rho = upper
    return cert
