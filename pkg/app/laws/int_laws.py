"""Laws of Int over finite flat domains, and of the embedding of lenses into it."""

from app.core.base import DCPO, unit_carrier
from app.core.category import Interface
from app.core.context import lens_ctx_map, lens_proj_left, traced_ctx_map, traced_proj_left
from app.core.intcat import int_category, lens_to_int, lensctx_to_intctx
from app.core.lens import lens_structural, lens_symmetry
from app.laws.base_law import BaseLaw, describe
from app.utils.generators import random_carrier, random_int, random_interfaces, random_lens, random_lens_context


def _chain(*morphisms):
    """Compose left to right."""
    result = morphisms[0]
    for morphism in morphisms[1:]:
        result = int_category.compose(morphism, result)
    return result


class IntLaw(BaseLaw):
    modes = (DCPO,)


class IntIdentityLaw(IntLaw):
    def __init__(self):
        super().__init__("int-identity", "intcat", "id ∘ f = f = f ∘ id in Int")

    def check(self, rng, mode, max_atoms):
        a, b = random_interfaces(rng, mode, max_atoms, 2)
        f = random_int(rng, a, b)
        left = int_category.compose(int_category.identity(b), f)
        right = int_category.compose(f, int_category.identity(a))
        if left == f and right == f:
            return None
        return describe(f=f, id_after=left, id_before=right)


class IntAssociativityLaw(IntLaw):
    def __init__(self):
        super().__init__("int-associativity", "intcat", "(h ∘ g) ∘ f = h ∘ (g ∘ f) in Int")

    def check(self, rng, mode, max_atoms):
        a, b, c, d = random_interfaces(rng, mode, max_atoms, 4)
        f, g, h = random_int(rng, a, b), random_int(rng, b, c), random_int(rng, c, d)
        first = int_category.compose(int_category.compose(h, g), f)
        second = int_category.compose(h, int_category.compose(g, f))
        int_category.validate(first)
        if first == second:
            return None
        return describe(f=f, g=g, h=h, grouped_left=first, grouped_right=second)


class IntInterchangeLaw(IntLaw):
    def __init__(self):
        super().__init__("int-interchange", "intcat", "(g₁ ⊗ g₂) ∘ (f₁ ⊗ f₂) = (g₁ ∘ f₁) ⊗ (g₂ ∘ f₂) in Int")

    def check(self, rng, mode, max_atoms):
        a1, b1, c1, a2, b2, c2 = random_interfaces(rng, mode, max_atoms, 6)
        f1, g1 = random_int(rng, a1, b1), random_int(rng, b1, c1)
        f2, g2 = random_int(rng, a2, b2), random_int(rng, b2, c2)
        first = int_category.compose(int_category.tensor(g1, g2), int_category.tensor(f1, f2))
        second = int_category.tensor(int_category.compose(g1, f1), int_category.compose(g2, f2))
        if first == second:
            return None
        return describe(f1=f1, g1=g1, f2=f2, g2=g2, composite_of_tensors=first, tensor_of_composites=second)


class YankingLaw(IntLaw):
    def __init__(self):
        super().__init__("int-yanking", "intcat", "both snake composites of cups and caps are identities")

    def check(self, rng, mode, max_atoms):
        (a,) = random_interfaces(rng, mode, max_atoms, 1)
        cat = int_category
        unit = cat.unit()
        a_star = a.dual()

        # A → I⊗A → (A⊗A*)⊗A → A⊗(A*⊗A) → A⊗I → A
        snake = _chain(
            cat.canonical(a, unit.tensor(a)),
            cat.tensor(cat.eta(a), cat.identity(a)),
            cat.canonical(a.tensor(a_star).tensor(a), a.tensor(a_star.tensor(a))),
            cat.tensor(cat.identity(a), cat.eps(a_star)),
            cat.canonical(a.tensor(unit), a),
        )
        # A* → A*⊗I → A*⊗(A⊗A*) → (A*⊗A)⊗A* → I⊗A* → A*
        co_snake = _chain(
            cat.canonical(a_star, a_star.tensor(unit)),
            cat.tensor(cat.identity(a_star), cat.eta(a)),
            cat.canonical(a_star.tensor(a.tensor(a_star)), a_star.tensor(a).tensor(a_star)),
            cat.tensor(cat.eps(a_star), cat.identity(a_star)),
            cat.canonical(unit.tensor(a_star), a_star),
        )
        if snake == cat.identity(a) and co_snake == cat.identity(a_star):
            return None
        return describe(interface=a, snake=snake, co_snake=co_snake)


class LensEmbeddingLaw(IntLaw):
    def __init__(self):
        super().__init__(
            "lens-to-int-functor",
            "intcat",
            "lens_to_int preserves identities, composition, tensor and symmetry, and sends counits to caps",
        )

    def check(self, rng, mode, max_atoms):
        lenses = self.lenses(mode)
        a, b, c, d = random_interfaces(rng, mode, max_atoms, 4)
        lam, mu, nu = random_lens(rng, a, b), random_lens(rng, b, c), random_lens(rng, c, d)
        failures = {}
        if lens_to_int(lenses.identity(a)) != int_category.identity(a):
            failures["identity"] = str(a)
        if lens_to_int(lenses.compose(mu, lam)) != int_category.compose(lens_to_int(mu), lens_to_int(lam)):
            failures["compose"] = "lens_to_int(μ ∘ λ) differs from lens_to_int(μ) ∘ lens_to_int(λ)"
        if lens_to_int(lenses.tensor(lam, nu)) != int_category.tensor(lens_to_int(lam), lens_to_int(nu)):
            failures["tensor"] = "lens_to_int(λ ⊗ ν) differs from lens_to_int(λ) ⊗ lens_to_int(ν)"
        if lens_to_int(lens_symmetry(a, c)) != int_category.symmetry(a, c):
            failures["symmetry"] = f"{a} ⊗ {c}"

        carrier = random_carrier(rng, mode, max_atoms)
        point = Interface(carrier, unit_carrier(mode))
        square = int_category.canonical(Interface(carrier, carrier), point.tensor(point.dual()))
        cap = int_category.compose(int_category.eps(point), square)
        if lens_to_int(lens_structural("counit", carrier)) != cap:
            failures["counit"] = str(carrier)
        if not failures:
            return None
        return {**describe(lam=lam, mu=mu, nu=nu), **failures}


class ContextEmbeddingLaw(IntLaw):
    def __init__(self):
        super().__init__(
            "lens-context-to-int",
            "intcat",
            "embedding lens contexts commutes with ctx_map and with the left projection",
        )

    def check(self, rng, mode, max_atoms):
        x, y, x2, y2, w, z = random_interfaces(rng, mode, max_atoms, 6)
        failures = {}

        lam, mu = random_lens(rng, w, x), random_lens(rng, z, y)
        kappa = random_lens_context(rng, w, y)
        mapped = lensctx_to_intctx(lens_ctx_map(lam, mu, kappa))
        if mapped != traced_ctx_map(lens_to_int(lam), lens_to_int(mu), lensctx_to_intctx(kappa)):
            failures["ctx_map"] = "embedding does not commute with ctx_map"

        m2 = random_lens(rng, x2, y2)
        joint = random_lens_context(rng, x.tensor(x2), y.tensor(y2))
        projected = lensctx_to_intctx(lens_proj_left(m2, joint))
        if projected != traced_proj_left(lens_to_int(m2), lensctx_to_intctx(joint)):
            failures["projection"] = "embedding does not commute with the left projection"
        if not failures:
            return None
        return {**describe(lam=lam, mu=mu, kappa=kappa, m2=m2, joint=joint), **failures}


INT_LAWS = (
    IntIdentityLaw,
    IntAssociativityLaw,
    IntInterchangeLaw,
    YankingLaw,
    LensEmbeddingLaw,
    ContextEmbeddingLaw,
)
