"""Rules mapping the number of response categories to measurement error.

An *independent* profile keeps the error sd constant no matter how many
categories the item offers.  A *linear* profile lets the sd grow linearly
with K over a closed range of category counts, modelling respondents who
cannot discriminate finely between many adjacent options.

The three named profiles (``small``, ``medium``, ``large``) cover K = 2..20.
Their labels are relative to a latent trait with unit sd and are only
convenient handles, not recommended standard categories.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidArgumentError, OutOfDomainError

INDEPENDENT = "independent"
LINEAR = "linear"

# name -> (k_min, k_max, sigma_start, sigma_end)
NAMED_PROFILES = {
    "small": (2, 20, 0.05, 0.5),
    "medium": (2, 20, 0.1, 1.0),
    "large": (2, 20, 0.2, 2.0),
}


def _is_int(value) -> bool:
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


@dataclass(frozen=True)
class DependencyProfile:
    kind: str
    sigma_constant: float | None = None
    k_min: int | None = None
    k_max: int | None = None
    sigma_start: float | None = None
    sigma_end: float | None = None
    name: str | None = None

    def __post_init__(self):
        if self.kind == INDEPENDENT:
            if self.sigma_constant is None or not self.sigma_constant > 0:
                raise InvalidArgumentError("independent profile needs sigma_constant > 0")
        elif self.kind == LINEAR:
            if not (_is_int(self.k_min) and _is_int(self.k_max)):
                raise InvalidArgumentError("linear profile needs integer k_min and k_max")
            if self.k_min < 2 or self.k_max <= self.k_min:
                raise InvalidArgumentError(
                    f"linear profile needs 2 <= k_min < k_max, got [{self.k_min}, {self.k_max}]"
                )
            if self.sigma_start is None or self.sigma_end is None or not self.sigma_start > 0:
                raise InvalidArgumentError("linear profile needs sigma_start > 0")
            if not self.sigma_end > self.sigma_start:
                raise InvalidArgumentError(
                    "linear profile must be increasing (sigma_end > sigma_start)"
                )
        else:
            raise InvalidArgumentError(f"unknown profile kind {self.kind!r}")

    @classmethod
    def independent(cls, sigma: float) -> "DependencyProfile":
        return cls(kind=INDEPENDENT, sigma_constant=float(sigma))

    @classmethod
    def linear(cls, k_min, k_max, sigma_start, sigma_end, name=None) -> "DependencyProfile":
        return cls(
            kind=LINEAR,
            k_min=k_min,
            k_max=k_max,
            sigma_start=float(sigma_start),
            sigma_end=float(sigma_end),
            name=name,
        )

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.kind == INDEPENDENT:
            return f"sigma={self.sigma_constant:g}"
        return f"linear[{self.k_min}-{self.k_max}]:{self.sigma_start:g}-{self.sigma_end:g}"

    def k_values(self) -> list[int]:
        if self.kind != LINEAR:
            raise InvalidArgumentError("only linear profiles have a category-count range")
        return list(range(self.k_min, self.k_max + 1))

    def to_dict(self) -> dict:
        if self.kind == INDEPENDENT:
            return {"kind": INDEPENDENT, "sigma": self.sigma_constant}
        out = {
            "kind": LINEAR,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "sigma_start": self.sigma_start,
            "sigma_end": self.sigma_end,
        }
        if self.name:
            out["name"] = self.name
        return out


def named_profile(name: str) -> DependencyProfile:
    try:
        k_min, k_max, start, end = NAMED_PROFILES[name]
    except (KeyError, TypeError):
        raise InvalidArgumentError(
            f"unknown dependency profile {name!r}; expected one of {sorted(NAMED_PROFILES)}"
        ) from None
    return DependencyProfile.linear(k_min, k_max, start, end, name=name)


def sigma_for(profile: DependencyProfile, num_categories: int) -> float:
    """Measurement error sd for an item with ``num_categories`` options.

    Linear interpolation is done in exact rational arithmetic on the decimal
    values of the endpoints, so e.g. the medium profile yields exactly 0.15
    at K = 3 rather than an accumulated rounding neighbour.
    """
    if not _is_int(num_categories) or num_categories < 2:
        raise InvalidArgumentError(f"number of categories must be an integer >= 2, got {num_categories!r}")
    if profile.kind == INDEPENDENT:
        return profile.sigma_constant
    if not profile.k_min <= num_categories <= profile.k_max:
        raise OutOfDomainError(
            f"K={num_categories} outside profile range [{profile.k_min}, {profile.k_max}]"
        )
    start = Fraction(repr(profile.sigma_start))
    end = Fraction(repr(profile.sigma_end))
    step = (end - start) / (profile.k_max - profile.k_min)
    return float(start + (num_categories - profile.k_min) * step)
