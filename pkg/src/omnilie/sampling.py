"""Seeded random generation of test objects.

All draws come from :class:`random.Random` (Mersenne Twister MT19937).
Integer coefficients are uniform in ``[-3, 3]``; polynomial total degree is
bounded by ``max_deg``.  Suites derive a private generator from the string
``"{seed}:{suite}"`` so that adding a suite never perturbs another suite's
stream.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .coeff import Poly, as_rational, monomials
from .forms import Derivation, EForm, ScalarForm
from .gauge import GenForm
from .jet import JForm

PRNG_NAME = "MT19937 (Python random.Random)"
COEF_RANGE = (-3, 3)


def suite_rng(seed: int, suite: str) -> random.Random:
    return random.Random(f"{seed}:{suite}")


class Sampler:
    """Draws random polynomials, forms, derivations and sections on a fixed chart."""

    def __init__(self, rng: random.Random, m: int, r: int = 1, max_deg: int = 2, density: float = 0.5):
        self.rng, self.m, self.r, self.max_deg, self.density = rng, m, r, max_deg, density
        self._mons = monomials(m, max_deg)

    def coef(self) -> int:
        return self.rng.randint(*COEF_RANGE)

    def poly(self, max_deg: int | None = None) -> Poly:
        mons = self._mons if max_deg is None else monomials(self.m, max_deg)
        terms = {}
        for e in mons:
            if self.rng.random() < self.density:
                terms[e] = self.coef()
        return Poly(self.m, terms)

    def nonzero_poly(self) -> Poly:
        while True:
            p = self.poly()
            if p.terms:
                return p

    def scalar_form(self, k: int) -> ScalarForm:
        if k > self.m:
            return ScalarForm.zero(self.m, k)
        return ScalarForm(self.m, k, {I: self.poly() for I in combinations(range(self.m), k)})

    def eform(self, k: int) -> EForm:
        return EForm(self.scalar_form(k) for _ in range(self.r))

    def jform(self, n: int) -> JForm:
        return JForm(n, self.eform(n), self.eform(n - 1) if n else None)

    def derivation(self) -> Derivation:
        X = [self.poly() for _ in range(self.m)]
        Phi = [[self.poly() for _ in range(self.r)] for _ in range(self.r)]
        return Derivation(X, Phi)

    def genform(self, k: int) -> GenForm:
        N = self.m + self.r * self.r
        comps = {}
        for S in combinations(range(N), k):
            if self.rng.random() < self.density or k == 0:
                comps[S] = tuple(self.poly() for _ in range(self.r))
        return GenForm(self.m, self.r, k, comps)

    def omni(self, n: int):
        from .omni import OmniSection

        return OmniSection(self.derivation(), self.jform(n))

    def rational_point(self, den: int = 4) -> list:
        return [as_rational(Fraction(self.rng.randint(-6, 6), self.rng.randint(1, den))) for _ in range(self.m)]
