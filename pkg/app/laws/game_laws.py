"""Open-game laws, compared as equilibrium relations on sampled contexts.

Games are built from decisions that observe at most one atom and choose from
at most two, joined by random zero-player wiring, so profile spaces stay small.
"""

from app.core.base import DCPO, SET, payoff_domain, unit_carrier
from app.core.category import Interface
from app.core.context import lens_dcpo_contexts, lens_set_contexts, traced_contexts
from app.core.opengame import (
    equilibrium_relation,
    og_decision,
    og_pure,
    og_seq,
    og_tensor,
    og_transpose,
    og_transpose_compact,
)
from app.laws.base_law import BaseLaw
from app.utils.generators import random_carrier, random_context, random_morphism

SAMPLED_CONTEXTS = 3
CHOICE_ATOMS = 2


def _reals(mode):
    return payoff_domain(mode, (0, 1))


def _contexts(rng, structure, src, dst):
    return [random_context(rng, structure, src, dst) for _ in range(SAMPLED_CONTEXTS)]


def _summary(relation) -> str:
    return f"{len(relation)} (profile, context) pairs"


class GameLaw(BaseLaw):
    def structure(self, rng, mode):
        if mode == SET:
            return lens_set_contexts
        return rng.choice((lens_dcpo_contexts, traced_contexts))

    def observed(self, rng, mode):
        return random_carrier(rng, mode, 1, unit_weight=0.3)

    def choice(self, rng, mode, max_atoms=CHOICE_ATOMS):
        return random_carrier(rng, mode, min(max_atoms, CHOICE_ATOMS), unit_weight=0.0)

    def decision(self, rng, structure, observe, name):
        choose = self.choice(rng, structure.mode)
        return og_decision(structure, observe, choose, _reals(structure.mode), name)

    def wire(self, rng, structure, src, dst):
        return og_pure(structure, random_morphism(rng, structure.category, src, dst), name="wire")

    def step(self, rng, structure, observe, name):
        """A decision followed by random wiring back to an interface ``(Z, 1)``."""
        game = self.decision(rng, structure, observe, name)
        unit = unit_carrier(structure.mode)
        after = Interface(self.observed(rng, structure.mode), unit)
        return og_seq(game, self.wire(rng, structure, game.dst, after))

    def compare(self, first, second, contexts):
        left = equilibrium_relation(first, contexts)
        right = equilibrium_relation(second, contexts)
        if left == right:
            return None
        return {"first": f"{first.name}: {_summary(left)}", "second": f"{second.name}: {_summary(right)}"}


class GameAssociativityLaw(GameLaw):
    def __init__(self):
        super().__init__("og-associativity", "opengame", "(G ; H) ; K and G ; (H ; K) have the same equilibria")

    def check(self, rng, mode, max_atoms):
        s = self.structure(rng, mode)
        unit = unit_carrier(mode)
        g = self.step(rng, s, self.observed(rng, mode), "g")
        h = self.wire(rng, s, g.dst, Interface(self.observed(rng, mode), unit))
        k = self.decision(rng, s, h.dst.fwd, "k")
        left = og_seq(og_seq(g, h), k)
        right = og_seq(g, og_seq(h, k))
        for profile in left.profiles():
            s.category.validate(left.label(profile))
        return self.compare(left, right, _contexts(rng, s, left.src, left.dst))


class GameIdentityLaw(GameLaw):
    def __init__(self):
        super().__init__("og-identity", "opengame", "id ; G and G ; id have the same equilibria as G")

    def check(self, rng, mode, max_atoms):
        s = self.structure(rng, mode)
        g = self.step(rng, s, self.observed(rng, mode), "g")
        before = og_seq(og_pure(s, s.category.identity(g.src)), g)
        after = og_seq(g, og_pure(s, s.category.identity(g.dst)))
        contexts = _contexts(rng, s, g.src, g.dst)
        return self.compare(g, before, contexts) or self.compare(g, after, contexts)


class GameInterchangeLaw(GameLaw):
    def __init__(self):
        super().__init__(
            "og-interchange",
            "opengame",
            "(G₁ ; H₁) ⊗ (G₂ ; H₂) and (G₁ ⊗ G₂) ; (H₁ ⊗ H₂) have the same equilibria",
        )

    def check(self, rng, mode, max_atoms):
        s = self.structure(rng, mode)
        unit = unit_carrier(mode)
        g1 = self.decision(rng, s, self.observed(rng, mode), "g1")
        g2 = self.decision(rng, s, self.observed(rng, mode), "g2")
        h1 = self.wire(rng, s, g1.dst, Interface(self.observed(rng, mode), unit))
        h2 = self.wire(rng, s, g2.dst, Interface(self.observed(rng, mode), unit))
        parallel = og_tensor(og_seq(g1, h1), og_seq(g2, h2))
        staged = og_seq(og_tensor(g1, g2), og_tensor(h1, h2))
        return self.compare(parallel, staged, _contexts(rng, s, parallel.src, parallel.dst))


class PureEmbeddingLaw(GameLaw):
    def __init__(self):
        super().__init__(
            "og-pure-embedding",
            "opengame",
            "zero-player games compose like their morphisms and are always in equilibrium",
        )

    def check(self, rng, mode, max_atoms):
        s = self.structure(rng, mode)
        cat = s.category
        a, b, c = (
            Interface(self.choice(rng, mode, max_atoms), self.choice(rng, mode, max_atoms)) for _ in range(3)
        )
        f, g = random_morphism(rng, cat, a, b), random_morphism(rng, cat, b, c)
        composite = og_seq(og_pure(s, f), og_pure(s, g))
        profile = next(composite.profiles())
        failures = {}
        if composite.label(profile) != cat.compose(g, f):
            failures["compose"] = "label of the sequential game differs from the composite morphism"
        tensor = og_tensor(og_pure(s, f), og_pure(s, g))
        if tensor.label(next(tensor.profiles())) != cat.tensor(f, g):
            failures["tensor"] = "label of the parallel game differs from the tensor morphism"
        if not all(composite.check(profile, ctx) for ctx in _contexts(rng, s, a, c)):
            failures["equilibrium"] = "a zero-player game was not in equilibrium"
        return failures or None


class TransposeLaw(GameLaw):
    modes = (DCPO,)

    def __init__(self):
        super().__init__(
            "og-transpose",
            "opengame",
            "the direct transpose equals the cup/cap transpose and is an involution",
        )

    def check(self, rng, mode, max_atoms):
        s = traced_contexts
        g = self.step(rng, s, self.observed(rng, mode), "g")
        direct = og_transpose(g)
        compact = og_transpose_compact(g)
        transposed = _contexts(rng, s, direct.src, direct.dst)
        return self.compare(direct, compact, transposed) or self.compare(
            g, og_transpose(direct), _contexts(rng, s, g.src, g.dst)
        )


GAME_LAWS = (
    GameAssociativityLaw,
    GameIdentityLaw,
    GameInterchangeLaw,
    PureEmbeddingLaw,
    TransposeLaw,
)
