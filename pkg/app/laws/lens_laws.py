"""Category, monoidal and dinaturality laws of lenses."""

from app.core.base import product, unit_carrier
from app.core.category import Interface
from app.core.lens import lens_structural, lift
from app.laws.base_law import BaseLaw, describe
from app.utils.generators import random_carrier, random_interfaces, random_lens, random_table


class LensIdentityLaw(BaseLaw):
    def __init__(self):
        super().__init__("lens-identity", "lens", "id ∘ λ = λ = λ ∘ id")

    def check(self, rng, mode, max_atoms):
        cat = self.lenses(mode)
        a, b = random_interfaces(rng, mode, max_atoms, 2)
        lam = random_lens(rng, a, b)
        left = cat.compose(cat.identity(b), lam)
        right = cat.compose(lam, cat.identity(a))
        if left == lam and right == lam:
            return None
        return describe(lens=lam, id_after=left, id_before=right)


class LensAssociativityLaw(BaseLaw):
    def __init__(self):
        super().__init__("lens-associativity", "lens", "(ν ∘ μ) ∘ λ = ν ∘ (μ ∘ λ)")

    def check(self, rng, mode, max_atoms):
        cat = self.lenses(mode)
        a, b, c, d = random_interfaces(rng, mode, max_atoms, 4)
        lam, mu, nu = random_lens(rng, a, b), random_lens(rng, b, c), random_lens(rng, c, d)
        first = cat.compose(cat.compose(nu, mu), lam)
        second = cat.compose(nu, cat.compose(mu, lam))
        if first == second:
            return None
        return describe(lam=lam, mu=mu, nu=nu, grouped_left=first, grouped_right=second)


class LensInterchangeLaw(BaseLaw):
    def __init__(self):
        super().__init__(
            "lens-interchange",
            "lens",
            "(μ₁ ⊗ μ₂) ∘ (λ₁ ⊗ λ₂) = (μ₁ ∘ λ₁) ⊗ (μ₂ ∘ λ₂); results are valid lenses",
        )

    def check(self, rng, mode, max_atoms):
        cat = self.lenses(mode)
        a1, b1, c1, a2, b2, c2 = random_interfaces(rng, mode, max_atoms, 6)
        lam1, mu1 = random_lens(rng, a1, b1), random_lens(rng, b1, c1)
        lam2, mu2 = random_lens(rng, a2, b2), random_lens(rng, b2, c2)
        first = cat.compose(cat.tensor(mu1, mu2), cat.tensor(lam1, lam2))
        second = cat.tensor(cat.compose(mu1, lam1), cat.compose(mu2, lam2))
        cat.validate(first)
        if first == second:
            return None
        return describe(lam1=lam1, mu1=mu1, lam2=lam2, mu2=mu2, composite_of_tensors=first, tensor_of_composites=second)


class LensUnitorLaw(BaseLaw):
    def __init__(self):
        super().__init__("lens-unitors", "lens", "λ ⊗ id_I and id_I ⊗ λ re-bracket to λ")

    def check(self, rng, mode, max_atoms):
        cat = self.lenses(mode)
        a, b = random_interfaces(rng, mode, max_atoms, 2)
        unit = cat.unit()
        lam = random_lens(rng, a, b)
        right = cat.compose(
            cat.canonical(b.tensor(unit), b),
            cat.compose(cat.tensor(lam, cat.identity(unit)), cat.canonical(a, a.tensor(unit))),
        )
        left = cat.compose(
            cat.canonical(unit.tensor(b), b),
            cat.compose(cat.tensor(cat.identity(unit), lam), cat.canonical(a, unit.tensor(a))),
        )
        if left == lam and right == lam:
            return None
        return describe(lens=lam, left_unitor=left, right_unitor=right)


class CounitDinaturalityLaw(BaseLaw):
    def __init__(self):
        super().__init__(
            "counit-dinaturality",
            "lens",
            "ε_Y ∘ (f ⊗ id) = ε_X ∘ (id ⊗ f*) for covariant and contravariant liftings of f",
        )

    def check(self, rng, mode, max_atoms):
        cat = self.lenses(mode)
        unit = unit_carrier(mode)
        x, y = random_carrier(rng, mode, max_atoms), random_carrier(rng, mode, max_atoms)
        f = random_table(rng, x, y)

        def cap(carrier, morphism):
            square = Interface(product(carrier, unit), product(carrier, unit))
            iso = cat.canonical(square, Interface(carrier, carrier))
            return cat.compose(lens_structural("counit", carrier), cat.compose(iso, morphism))

        covariant = cap(y, cat.tensor(lift(f, "cov"), cat.identity(Interface(unit, y))))
        contravariant = cap(x, cat.tensor(cat.identity(Interface(x, unit)), lift(f, "contra")))
        if covariant == contravariant:
            return None
        return describe(f=f, through_cov=covariant, through_contra=contravariant)


LENS_LAWS = (
    LensIdentityLaw,
    LensAssociativityLaw,
    LensInterchangeLaw,
    LensUnitorLaw,
    CounitDinaturalityLaw,
)
