import hypothesis
import numpy as np
from hypothesis import strategies as st

from latgauss.oracle import BoxSpec
from latgauss.params import NaturalParam

hypothesis.settings.register_profile("default", max_examples=20, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=200, deadline=None)
hypothesis.settings.load_profile("default")

REF_XI = NaturalParam([-0.2, -0.2], np.diag([0.1, 0.2]))
REF_XI_PRIME = NaturalParam([0.2, 0.2], np.diag([0.15, 0.25]))


def random_natural(rng, d, eig=(0.05, 2.0), lin=1.0):
    q, _ = np.linalg.qr(rng.normal(size=(d, d)))
    b = q @ np.diag(rng.uniform(*eig, size=d)) @ q.T
    return NaturalParam(rng.uniform(-lin, lin, size=d), 0.5 * (b + b.T))


def random_pair(rng, d=None, eig=(0.05, 2.0), lin=1.0):
    d = d or int(rng.integers(1, 3))
    return random_natural(rng, d, eig, lin), random_natural(rng, d, eig, lin)


def box_for(*params, sigmas=14.0):
    """Oracle box wide enough to hold every parameter's mass."""
    reach = 1
    for xi in params:
        mode = np.linalg.solve(xi.xi2, xi.xi1)
        lam = np.linalg.eigvalsh(xi.xi2)[0]
        reach = max(reach, int(np.ceil(np.max(np.abs(mode)) + sigmas / np.sqrt(2 * np.pi * lam))))
    return BoxSpec(half_width=max(reach, 10))


@st.composite
def naturals(draw, d=None, eig=(0.05, 2.0), lin=1.0):
    d = d or draw(st.integers(1, 2))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_natural(np.random.default_rng(seed), d, eig, lin)


@st.composite
def natural_pairs(draw, d=None, eig=(0.05, 2.0), lin=1.0):
    d = d or draw(st.integers(1, 2))
    return draw(naturals(d, eig, lin)), draw(naturals(d, eig, lin))



def binned_counts(values, probs, support, center=0, half=10):
    """Observed and expected counts on ``center-half..center+half``, tails folded into the ends.

    ``probs`` are the target probabilities of the integer ``support``.
    Sparse end bins are pooled inward until each expects at least 5.
    """
    n = len(values)
    edges = np.arange(center - half, center + half + 1)
    clip_v = np.clip(values, edges[0], edges[-1]).astype(int) - edges[0]
    clip_s = np.clip(support, edges[0], edges[-1]).astype(int) - edges[0]
    obs = np.bincount(clip_v, minlength=len(edges)).astype(float)
    exp = n * np.bincount(clip_s, weights=probs, minlength=len(edges))
    obs, exp = list(obs), list(exp)
    for side in (0, -1):
        while len(exp) > 2 and exp[side] < 5:
            e, o = exp.pop(side), obs.pop(side)
            exp[side] += e
            obs[side] += o
    return np.array(obs), np.array(exp)


def chi_square_pvalue(values, probs, support, center=0, half=10):
    from scipy.stats import chisquare
    obs, exp = binned_counts(values, probs, support, center, half)
    exp *= obs.sum() / exp.sum()
    return float(chisquare(obs, exp).pvalue)
