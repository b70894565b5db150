# -*- coding: utf-8 -*-
#
# Copyright © 2024 The cvcluster developers
#
# This library is free software; you can redistribute it and/or modify it under
# the terms of the GNU Lesser General Public License as published by the Free
# Software Foundation; either version 2.1 of the License, or (at your option)
# any later version.
#
# This library is distributed in the hope that it will be useful, but WITHOUT
# ANY WARRANTY; without even the implied warranty of MERCHANTABILITY or FITNESS
# FOR A PARTICULAR PURPOSE.  See the GNU Lesser General Public License for more
# details.
#
# You should have received a copy of the GNU Lesser General Public License
# along with this library.  If not, see <http://www.gnu.org/licenses/>.

"""
Entanglement of the two teleportation outputs.

The output covariance of every scenario handled here has the X-form

    [[a, 0, 0, c],
     [0, b, c, 0],
     [0, c, a, 0],
     [c, 0, 0, b]]

in the (q_mu, p_mu, q_nu, p_nu) ordering, so the triple (a, b, c)
determines the symplectic spectrum of the partial transpose,
the log-negativity and the witness values.
"""

import math
from collections import namedtuple

import numpy
from scipy import optimize

from cvcluster.core.exceptions import ReportedException
from cvcluster.core.canonical import (CANONICAL, OUTPUT_NAMES,
                                      TeleportOutputs, check_family,
                                      nrail_outputs_canonical)
from cvcluster.core.lincluster import PIVOTED, nrail_outputs_lo
from cvcluster.core.qalg import VACUUM_VARIANCE, covariance_matrix
from cvcluster.utils.loggable import Logger, error, warn


IDEAL_EN = -math.log(math.sqrt(2) - 1)

# sqrt(ab) - c at which E_N is half of IDEAL_EN.
HALF_IDEAL_GAP = math.sqrt(math.sqrt(2) - 1) / 4

XFORM_ATOL = 1e-12

R_BRACKET = (0.0, 5.0)

L4 = 'L4'
L4_OUTER = 'L4-outer'


class XFormError(ReportedException):
    """
    Raised when an output covariance does not have the X-form.
    """
    pass


class RootFindingError(ReportedException):
    """
    Raised when a threshold cannot be bracketed.
    """
    pass


class UnphysicalStateWarning(ReportedException):
    """
    Reported for correlators violating the uncertainty principle.
    """
    pass


Logger.register_error_code('xform-violation', XFormError, domain='entangle')
Logger.register_error_code('bracket-error', RootFindingError,
                           domain='entangle')
Logger.register_warning_code('unphysical-state', UnphysicalStateWarning,
                             domain='entangle')


Correlators = namedtuple('Correlators', ['a', 'b', 'c'])

SymplecticPair = namedtuple('SymplecticPair', ['minus', 'plus'])

Witness = namedtuple('Witness', ['g', 'value', 'bound', 'entangled'])


def covariance_x(corr):
    """
    Returns:
        numpy.ndarray: the X-form covariance of `corr`.
    """
    a, b, c = corr
    return numpy.array([[a, 0.0, 0.0, c],
                        [0.0, b, c, 0.0],
                        [0.0, c, a, 0.0],
                        [c, 0.0, 0.0, b]])


_OFF_PATTERN = ((0, 1), (0, 2), (1, 3), (2, 3))


def correlators_from_outputs(outputs, registry=None):
    """
    Reduce the covariance of four output quadratures to (a, b, c).

    Args:
        outputs: canonical.TeleportOutputs, or any (q_mu, p_mu, q_nu,
            p_nu) sequence together with `registry`.
        registry: qalg.ModeRegistry, defaults to `outputs.registry`.

    Returns:
        Correlators: the triple.
    """
    if registry is None:
        registry = outputs.registry
    ops = list(outputs)[:4]

    cov = covariance_matrix(ops, registry)

    for row, col in _OFF_PATTERN:
        if abs(cov[row, col]) > XFORM_ATOL:
            error('xform-violation',
                  'Correlator <%s %s> should vanish' %
                  (OUTPUT_NAMES[row], OUTPUT_NAMES[col]),
                  value=cov[row, col])

    for (first, second), what in ((((0, 0), (2, 2)), 'a'),
                                  (((1, 1), (3, 3)), 'b'),
                                  (((0, 3), (1, 2)), 'c')):
        if abs(cov[first] - cov[second]) > XFORM_ATOL:
            error('xform-violation',
                  'Outputs are asymmetric in %s: <%s %s> != <%s %s>' %
                  (what, OUTPUT_NAMES[first[0]], OUTPUT_NAMES[first[1]],
                   OUTPUT_NAMES[second[0]], OUTPUT_NAMES[second[1]]),
                  difference=cov[first] - cov[second])

    return Correlators((cov[0, 0] + cov[2, 2]) / 2,
                       (cov[1, 1] + cov[3, 3]) / 2,
                       (cov[0, 3] + cov[1, 2]) / 2)


def symplectic_pt(corr):
    """
    Symplectic eigenvalues of the partially transposed X-form
    covariance, |sqrt(ab) -+ c|.

    Returns:
        SymplecticPair: the two eigenvalues, smallest first.
    """
    a, b, c = corr
    root = math.sqrt(a * b)
    first, second = abs(root - c), abs(root + c)
    pair = SymplecticPair(min(first, second), max(first, second))

    if pair.plus < VACUUM_VARIANCE - XFORM_ATOL:
        warn('unphysical-state',
             'Largest symplectic eigenvalue %g is below 1/4' % pair.plus,
             a=a, b=b, c=c)

    return pair


def symplectic_pt_generic(cov):
    """
    Symplectic eigenvalues of the partial transpose of any two-mode
    covariance in the (q_1, p_1, q_2, p_2) ordering.

    With blocks A, B and C, the partial transpose flips the sign of
    det C in the seralian D = det A + det B - 2 det C, and
    nu^2 = (D -+ sqrt(D^2 - 4 det V)) / 2.

    Returns:
        SymplecticPair: the two eigenvalues, smallest first.
    """
    cov = numpy.asarray(cov, dtype=float)
    if cov.shape != (4, 4):
        error('xform-violation', 'Expected a 4x4 covariance',
              shape=cov.shape)

    det_a = numpy.linalg.det(cov[:2, :2])
    det_b = numpy.linalg.det(cov[2:, 2:])
    det_c = numpy.linalg.det(cov[:2, 2:])
    det_v = numpy.linalg.det(cov)

    seralian = det_a + det_b - 2 * det_c
    discriminant = math.sqrt(max(seralian ** 2 - 4 * det_v, 0.0))
    minus = max((seralian - discriminant) / 2, 0.0)
    plus = max((seralian + discriminant) / 2, 0.0)
    return SymplecticPair(math.sqrt(minus), math.sqrt(plus))


def log_negativity(lambda_minus):
    """
    Returns:
        float: max(0, -ln(4 lambda_minus)).
    """
    if lambda_minus <= 0:
        return math.inf
    return max(0.0, -math.log(4 * lambda_minus))


def _check_rails(rails):
    if rails == math.inf or rails in (L4, L4_OUTER):
        return rails
    if isinstance(rails, bool) or not isinstance(rails, int) or rails < 1:
        error('invalid-topology',
              'Rail counts are integers >= 1 or infinity, got %r' %
              (rails,))
    return rails


def correlators_closed(family, rails, r):
    """
    Closed-form output correlators.

    Args:
        family: str, `CANONICAL` or `LINEAR_OPTICAL`.
        rails: int N, `math.inf` for the N -> infinity limit, `L4` for
            the four-node chain with inputs on the inner nodes, or
            `L4_OUTER` (canonical only) with inputs on the chain ends.
        r: float, the squeezing parameter.

    Returns:
        Correlators: the triple.
    """
    check_family(family)
    rails = _check_rails(rails)
    x = math.exp(-2 * r)

    if family == CANONICAL:
        if rails == L4:
            return Correlators((1 + x) / 4, (2 + x) / 4, 0.25)
        if rails == L4_OUTER:
            return Correlators((1 + x) / 4, (1 + x) / 2, (1 + x) / 4)
        if rails == math.inf:
            return Correlators(0.25, (1 + x) / 2, 0.25)
        return Correlators((1 + x / rails) / 4, (1 + x) / 2, 0.25)

    if rails == L4:
        return Correlators((1 + 2 * x) / 4, (2 + 3 * x) / 4, (1 + x) / 4)
    if rails == L4_OUTER:
        error('invalid-topology',
              'The outer L4 arrangement has no linear-optical form')
    if rails == math.inf:
        return Correlators((1 + 2 * x) / 4, (2 + 3 * x) / 4, (1 + x) / 4)
    return Correlators((1 + (2 * rails + 1) * x / rails) / 4,
                       (2 + 3 * x) / 4, (1 + x) / 4)


def en_closed(family, rails, r):
    """
    Closed-form log-negativity of the teleportation outputs.
    """
    return log_negativity(symplectic_pt(
        correlators_closed(family, rails, r)).minus)


def pipeline_outputs(family, rails, r, frame=PIVOTED):
    """
    Build the cluster and the N-rail outputs for `family`.

    Returns:
        canonical.TeleportOutputs: the outputs.
    """
    check_family(family)
    if rails == math.inf or isinstance(rails, str):
        error('invalid-topology',
              'The pipeline only builds finite N-rail clusters')

    if family == CANONICAL:
        return nrail_outputs_canonical(rails, r)
    return nrail_outputs_lo(rails, r, frame=frame)


def pipeline_correlators(family, rails, r, frame=PIVOTED):
    """
    Output correlators computed from scratch: cluster construction,
    teleportation outputs, covariance.
    """
    return correlators_from_outputs(pipeline_outputs(family, rails, r,
                                                     frame))


def pipeline_sweep(family, rails, r_values, frame=PIVOTED):
    """
    `pipeline_correlators` over several squeezing values.

    The output quadratures do not depend on r, only their moments do,
    so the cluster is built once and evaluated against a re-squeezed
    registry for every value.

    Returns:
        list: one Correlators per entry of `r_values`.
    """
    outputs = pipeline_outputs(family, rails, 0.0, frame)
    res = []
    for r in r_values:
        registry = outputs.registry.resqueezed(r)
        res.append(correlators_from_outputs(
            TeleportOutputs(*(list(outputs)[:4] + [registry]))))
    return res


def pipeline_log_negativity(family, rails, r, frame=PIVOTED):
    """
    Log-negativity computed through the full pipeline.
    """
    return log_negativity(symplectic_pt(
        pipeline_correlators(family, rails, r, frame)).minus)


def _bisect(func, what):
    low, high = R_BRACKET
    f_low, f_high = func(low), func(high)
    if f_low * f_high > 0:
        error('bracket-error',
              'No sign change of %s over r in [%g, %g]' % (what, low, high),
              f_low=f_low, f_high=f_high)
    return optimize.bisect(func, low, high, xtol=1e-14, maxiter=200)


def rbar(family, rails):
    """
    The squeezing at which E_N reaches half of its ideal value.

    Args:
        family: str, `CANONICAL` or `LINEAR_OPTICAL`.
        rails: int, `math.inf` or `L4`.

    Returns:
        float: r such that sqrt(ab) - c equals `HALF_IDEAL_GAP`.
    """
    def gap(r):
        a, b, c = correlators_closed(family, rails, r)
        return math.sqrt(a * b) - c - HALF_IDEAL_GAP

    return _bisect(gap, 'the half-ideal gap for %s N=%s' % (family, rails))


def entanglement_threshold(family, rails):
    """
    The squeezing below which the outputs are not entangled.

    Returns:
        float: r such that sqrt(ab) - c equals 1/4.
    """
    def gap(r):
        a, b, c = correlators_closed(family, rails, r)
        return math.sqrt(a * b) - c - VACUUM_VARIANCE

    return _bisect(gap, 'the separability gap for %s N=%s' %
                   (family, rails))


def witness_wg(corr, g):
    """
    The variance-sum witness W_g = 2 (a + g^2 b - 2 g c).

    The outputs are certified entangled when W_g < g.

    Returns:
        Witness: (g, W_g, bound g, entangled flag).
    """
    a, b, c = corr
    value = 2 * (a + g * g * b - 2 * g * c)
    return Witness(g, value, g, value < g)


def optimal_gain(corr):
    """
    The gain (c + 1/4) / b giving the most stringent witness.
    """
    return (corr.c + VACUUM_VARIANCE) / corr.b


def db_of_r(r):
    """
    Squeezing in decibels, 10 log10(e^{-2r}).
    """
    return 10 * math.log10(math.exp(-2 * r))


def r_of_db(decibels):
    """
    Inverse of `db_of_r`.
    """
    return -decibels * math.log(10) / 20
