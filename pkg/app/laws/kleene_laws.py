"""Fixpoint, enumeration and argmax properties of the finite base."""

import itertools

from app.core.base import (
    DCPO,
    SET,
    FixpointError,
    FnTable,
    MonotonicityError,
    argmax,
    check_monotone,
    enumerate_maps,
    fold_product,
    least_fixpoint,
    payoff_domain,
    payoff_max,
    validate_table,
)
from app.laws.base_law import BaseLaw, describe
from app.utils.generators import random_carrier, random_table
from app.utils.helpers import format_value

MAX_FACTORS = 4


class KleeneFixpointLaw(BaseLaw):
    modes = (DCPO,)
    min_instances = 1000

    def __init__(self):
        super().__init__(
            "kleene-least-fixpoint",
            "base",
            "iteration from bottom stabilises within factors + 1 steps at the least fixpoint",
        )

    def check(self, rng, mode, max_atoms):
        factors = [random_carrier(rng, mode, max_atoms, unit_weight=0.0) for _ in range(rng.randint(1, MAX_FACTORS))]
        carrier = fold_product(factors, mode)
        f = random_table(rng, carrier, carrier)
        try:
            fix = least_fixpoint(carrier, f)
        except FixpointError as exc:
            return {**describe(f=f), "error": str(exc)}
        if f(fix) != fix:
            return describe(f=f, result=fix)
        for z in carrier.elements:
            if f(z) == z and not carrier.leq(fix, z):
                return describe(f=f, result=fix, smaller_fixpoint=z)
        return None


class MapEnumerationLaw(BaseLaw):
    def __init__(self):
        super().__init__(
            "map-enumeration",
            "base",
            "enumerate_maps lists each admissible map exactly once, all of them valid",
        )

    def check(self, rng, mode, max_atoms):
        src = random_carrier(rng, mode, max_atoms)
        dst = random_carrier(rng, mode, max_atoms)
        maps = enumerate_maps(src, dst)
        images = [table.images for table in maps]
        if len(set(images)) != len(images):
            return {"src": str(src), "dst": str(dst), "problem": "duplicate maps"}
        for table in maps:
            validate_table(table)
        if mode == SET:
            expected = dst.size**src.size
        else:
            expected = sum(
                1 for candidate in itertools.product(dst.elements, repeat=src.size) if _monotone(src, dst, candidate)
            )
        if len(maps) != expected:
            return {"src": str(src), "dst": str(dst), "problem": f"{len(maps)} maps, expected {expected}"}
        return None


def _monotone(src, dst, images) -> bool:
    try:
        check_monotone(FnTable(src, dst, images))
    except MonotonicityError:
        return False
    return True


class ArgmaxLaw(BaseLaw):
    def __init__(self):
        super().__init__("argmax", "base", "argmax is exactly the nonempty set of elements attaining the maximum")

    def check(self, rng, mode, max_atoms):
        choices = random_carrier(rng, mode, max_atoms)
        reals = payoff_domain(mode, rng.sample(range(-3, 4), rng.randint(1, 3)))
        k = random_table(rng, choices, reals)
        best = argmax(k)
        top = payoff_max(k.images)
        attaining = [y for y in choices.elements if k(y) == top]
        if best != attaining:
            return {**describe(k=k), "argmax": ", ".join(map(format_value, best))}
        return None


BASE_LAWS = (
    KleeneFixpointLaw,
    MapEnumerationLaw,
    ArgmaxLaw,
)
