"""Functoriality, naturality and projection laws of the context structures."""

from app.core.base import SET
from app.core.context import LensContextStructure, lens_dcpo_contexts, lens_set_contexts, traced_contexts
from app.laws.base_law import BaseLaw, describe
from app.utils.generators import random_context, random_interfaces, random_morphism


class ContextLaw(BaseLaw):
    """Set mode uses lens contexts; dcpo mode picks lens or traced contexts at random."""

    def structure(self, rng, mode):
        if mode == SET:
            return lens_set_contexts
        return rng.choice((lens_dcpo_contexts, traced_contexts))

    def category(self, structure):
        if isinstance(structure, LensContextStructure):
            return self.lenses(structure.mode)
        return structure.category


class ContextIdentityLaw(ContextLaw):
    def __init__(self):
        super().__init__("ctx-identity", "context", "ctx_map(id, id, κ) = κ")

    def check(self, rng, mode, max_atoms):
        s = self.structure(rng, mode)
        cat = self.category(s)
        a, b = random_interfaces(rng, mode, max_atoms, 2)
        kappa = random_context(rng, s, a, b)
        mapped = s.ctx_map(cat.identity(a), cat.identity(b), kappa)
        if mapped == kappa:
            return None
        return describe(kappa=kappa, mapped=mapped)


class ContextFunctorLaw(ContextLaw):
    def __init__(self):
        super().__init__(
            "ctx-functor",
            "context",
            "ctx_map(λ₂ ∘ λ₁, μ₁ ∘ μ₂, κ) = ctx_map(λ₂, μ₂, ctx_map(λ₁, μ₁, κ))",
        )

    def check(self, rng, mode, max_atoms):
        s = self.structure(rng, mode)
        cat = self.category(s)
        x, x1, x2, y, y1, y2 = random_interfaces(rng, mode, max_atoms, 6)
        lam1, lam2 = random_morphism(rng, cat, x, x1), random_morphism(rng, cat, x1, x2)
        mu2, mu1 = random_morphism(rng, cat, y, y1), random_morphism(rng, cat, y1, y2)
        kappa = random_context(rng, s, x, y2)
        at_once = s.ctx_map(cat.compose(lam2, lam1), cat.compose(mu1, mu2), kappa)
        stepwise = s.ctx_map(lam2, mu2, s.ctx_map(lam1, mu1, kappa))
        if at_once == stepwise:
            return None
        return describe(lam1=lam1, lam2=lam2, mu1=mu1, mu2=mu2, kappa=kappa, at_once=at_once, stepwise=stepwise)


class ContextNaturalityLaw(ContextLaw):
    def __init__(self):
        super().__init__(
            "ctx-naturality",
            "context",
            "ctx_map(λ₁, ν₁, (ν₂ ∘ μ₂ ∘ λ₂) / κ) = μ₂ / ctx_map(λ₁ ⊗ λ₂, ν₁ ⊗ ν₂, κ)",
        )

    def check(self, rng, mode, max_atoms):
        s = self.structure(rng, mode)
        cat = self.category(s)
        atoms = min(max_atoms, 2)
        w1, x1, y1, z1, w2, x2, y2, z2 = random_interfaces(rng, mode, atoms, 8)
        lam1, nu1 = random_morphism(rng, cat, w1, x1), random_morphism(rng, cat, y1, z1)
        lam2, mu2, nu2 = (
            random_morphism(rng, cat, w2, x2),
            random_morphism(rng, cat, x2, y2),
            random_morphism(rng, cat, y2, z2),
        )
        kappa = random_context(rng, s, w1.tensor(w2), z1.tensor(z2))
        through = cat.compose(nu2, cat.compose(mu2, lam2))
        top = s.ctx_map(lam1, nu1, s.proj_left(through, kappa))
        bottom = s.proj_left(mu2, s.ctx_map(cat.tensor(lam1, lam2), cat.tensor(nu1, nu2), kappa))
        if top == bottom:
            return None
        return describe(kappa=kappa, project_then_map=top, map_then_project=bottom)


class UnitProjectionLaw(ContextLaw):
    def __init__(self):
        super().__init__("ctx-unit-projection", "context", "id_I / κ is κ moved along the unitors")

    def check(self, rng, mode, max_atoms):
        s = self.structure(rng, mode)
        cat = self.category(s)
        x, y = random_interfaces(rng, mode, max_atoms, 2)
        unit = cat.unit()
        kappa = random_context(rng, s, x.tensor(unit), y.tensor(unit))
        projected = s.proj_left(cat.identity(unit), kappa)
        unitors = s.ctx_map(cat.canonical(x.tensor(unit), x), cat.canonical(y, y.tensor(unit)), kappa)
        if projected == unitors:
            return None
        return describe(kappa=kappa, projected=projected, along_unitors=unitors)


class ProjectionSymmetryLaw(ContextLaw):
    """The right projection derived through symmetries matches its direct lens formula."""

    def __init__(self):
        super().__init__("ctx-right-projection", "context", "m₁ \\ κ via symmetries = direct formula")

    def structure(self, rng, mode):
        return lens_set_contexts if mode == SET else lens_dcpo_contexts

    def check(self, rng, mode, max_atoms):
        s = self.structure(rng, mode)
        cat = self.category(s)
        x1, x2, y1, y2 = random_interfaces(rng, mode, max_atoms, 4)
        m1 = random_morphism(rng, cat, x1, y1)
        kappa = random_context(rng, s, x1.tensor(x2), y1.tensor(y2))
        derived = s.proj_right(m1, kappa)
        direct = s.proj_right_direct(m1, kappa)
        if derived == direct:
            return None
        return describe(m1=m1, kappa=kappa, derived=derived, direct=direct)


CONTEXT_LAWS = (
    ContextIdentityLaw,
    ContextFunctorLaw,
    ContextNaturalityLaw,
    UnitProjectionLaw,
    ProjectionSymmetryLaw,
)
