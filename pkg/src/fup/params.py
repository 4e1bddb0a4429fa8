"""
src/fup/params.py

Parameters of an FUP experiment, validated on construction.

- h or N (h = 1/N in the discrete model)
- eps0 / rho: scale exponent rho = 2/3 (1 - eps0), eps0 in (0, 1/4)
- nu, alpha0, alpha1: porosity constant and scale window
- gamma0, gamma1: FUP exponent window, the sets being porous on scales h^gamma0 .. h^gamma1
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, model_validator


def fup_scale_exponents(eps0: float) -> tuple[float, float, float]:
    """(rho, gamma0, gamma1) with rho = 2/3 (1 - eps0), gamma0 = (1 + 2 rho)/4 and gamma1 = 0."""
    if not 0 < eps0 < 0.25:
        raise ValueError(f"eps0 must lie in (0, 1/4), got {eps0}")
    rho = 2.0 / 3.0 * (1.0 - eps0)
    return rho, (1.0 + 2.0 * rho) / 4.0, 0.0


def porosity_window_for_h(h: float, gamma0: float, gamma1: float) -> tuple[float, float]:
    """Scales h^gamma0 .. h^gamma1."""
    if not 0 < h < 1:
        raise ValueError(f"h must lie in (0, 1), got {h}")
    return h ** gamma0, h ** gamma1


class FupParams(BaseModel):
    h: Optional[float] = None
    N: Optional[int] = None
    eps0: Optional[float] = None
    rho: Optional[float] = None
    nu: float
    alpha0: float
    alpha1: float
    gamma0: Optional[float] = None
    gamma1: Optional[float] = None

    @model_validator(mode="after")
    def _check(self) -> FupParams:
        if self.N is not None:
            if self.N < 2:
                raise ValueError(f"Grid size N must be >= 2, got {self.N}")
            if self.h is not None and abs(self.h - 1.0 / self.N) > 1e-15:
                raise ValueError(f"h = {self.h} is inconsistent with N = {self.N} (h = 1/N)")
            self.h = 1.0 / self.N
        if self.h is None or not 0 < self.h < 1:
            raise ValueError(f"h must be given (directly or via N) and lie in (0, 1), got {self.h}")

        if self.eps0 is not None:
            rho, g0, g1 = fup_scale_exponents(self.eps0)
            if self.rho is not None and abs(self.rho - rho) > 1e-12:
                raise ValueError(f"rho = {self.rho} is inconsistent with eps0 = {self.eps0} (rho = 2/3 (1 - eps0))")
            self.rho = rho
            if self.gamma0 is None:
                self.gamma0 = g0
            if self.gamma1 is None:
                self.gamma1 = g1
        if self.rho is not None and not 0.5 < self.rho < 2.0 / 3.0:
            raise ValueError(f"rho must lie in (1/2, 2/3), got {self.rho}")
        if self.gamma0 is None or self.gamma1 is None:
            raise ValueError("gamma0 and gamma1 must be given (directly or via eps0)")
        if not 0 <= self.gamma1 < 0.5 < self.gamma0 <= 1:
            raise ValueError(f"Exponent window must satisfy 0 <= gamma1 < 1/2 < gamma0 <= 1, got ({self.gamma0}, {self.gamma1})")
        if not 0 < self.nu < 1:
            raise ValueError(f"Porosity constant must satisfy 0 < nu < 1, got {self.nu}")
        if not 0 < self.alpha0 <= self.alpha1:
            raise ValueError(f"Scale window must satisfy 0 < alpha0 <= alpha1, got ({self.alpha0}, {self.alpha1})")
        return self

    def scale_window(self) -> tuple[float, float]:
        return porosity_window_for_h(self.h, self.gamma0, self.gamma1)
