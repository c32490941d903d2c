"""Discrete and lattice normal distributions as an exponential family.

The partition function is the real-argument Riemann theta function
``theta(xi) = sum_l exp(2 pi (-1/2 l' xi2 l + l' xi1))``; everything else
(moments, entropies, divergences, sampling) is built on ``log theta``.
"""

from .divergences import (ChernoffResult, DivergenceKind, DivergenceResult, amari_alpha,
                          bhatt_coefficient, bhattacharyya, cauchy_schwarz, chernoff, divergence,
                          gamma_divergence, hellinger_squared, hoelder, i_alpha_beta, jensen_skew,
                          kl_bregman, kl_centroid_left, kl_mixed, renyi, sharma_mittal,
                          skewed_bhatt_coefficient)
from .errors import (AcceptanceStall, ConjugateExponentError, DegenerateSample, DomainError,
                     DomainExit, InvalidInput, LatGaussError, NoConvergence, NoSignChange,
                     NumericalError, PointBudgetExceeded, RadiusCapExceeded, SingularHessian,
                     TailTooFat)
from .family import (continuous_natural_from_moments, cross_entropy, entropy, fisher_info_1d,
                     log_likelihood, log_pmf, mle, moments_from_natural, natural_from_moments,
                     ordinary_from_natural, pmf, unnormalized_pmf)
from .lattice import Lattice, TruncationSpec, enumerate_ellipsoid, truncation_radius
from .params import (AugmentedNatural, MomentParam, NaturalParam, OrdinaryParam, SufficientStat,
                     standard_natural)
from .sampling import (SampleBatch, SampleMethod, empirical_moments, make_rng, sample,
                       sample_exact_eps, sample_h1, sample_h2)
from .theta import ThetaResult, log_theta, theta

__version__ = "0.1.0"
