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
Canonical clusters, built by QND-coupling momentum-squeezed vacua along
the edges of a topology, their nullifiers, the outputs of the N-rail CZ
teleportation and the weighting of its mid-rail measurements.
"""

import math
from collections import OrderedDict, namedtuple

import numpy
from scipy import linalg

from cvcluster.core.exceptions import ReportedException
from cvcluster.core.gates import ModeState, apply_qnd
from cvcluster.core.qalg import (ModeRegistry, OperatorExpr, DEFAULT_ATOL,
                                 covariance_matrix, commutator_matrix,
                                 linear_combination)
from cvcluster.core.topology import nrail, mid_rails
from cvcluster.utils.loggable import Logger, error, debug


CANONICAL = 'canonical'
LINEAR_OPTICAL = 'lo'
FAMILIES = (CANONICAL, LINEAR_OPTICAL)


class WeightError(ReportedException):
    """
    Raised for invalid mid-rail weights or noise covariances.
    """
    pass


class FamilyError(ReportedException):
    """
    Raised for unknown cluster families.
    """
    pass


Logger.register_error_code('invalid-weights', WeightError,
                           domain='canonical')
Logger.register_error_code('singular-noise', WeightError,
                           domain='canonical')
Logger.register_error_code('unknown-family', FamilyError,
                           domain='canonical')


def check_family(family):
    """
    Error out unless `family` is one of `FAMILIES`.
    """
    if family not in FAMILIES:
        error('unknown-family', 'Unknown cluster family %r' % (family,),
              known=', '.join(FAMILIES))
    return family


class ClusterState(object):
    """
    The Heisenberg-picture state of a cluster.

    Attributes:
        spec: topology.ClusterSpec, the topology.
        nodes: OrderedDict, node id -> gates.ModeState.
        registry: qalg.ModeRegistry, the base modes the node quadratures
            are expressed over.
        family: str, `CANONICAL` or `LINEAR_OPTICAL`.
        seed_ids: OrderedDict, node id -> id of the squeezed base mode
            the node was seeded with.
    """

    def __init__(self, spec, nodes, registry, family, seed_ids):
        self.spec = spec
        self.nodes = OrderedDict(nodes)
        self.registry = registry
        self.family = check_family(family)
        self.seed_ids = OrderedDict(seed_ids)

    def node(self, k):
        """
        Returns:
            gates.ModeState: the quadratures of node `k`.
        """
        if k not in self.nodes:
            error('invalid-topology',
                  'No node %r in %s' % (k, self.spec.name))
        return self.nodes[k]

    def nullifier(self, k):
        """Shortcut to `nullifier`"""
        return nullifier(self, k)

    def nullifiers(self):
        """
        Returns:
            list: the nullifier of every node, in node order.
        """
        return [nullifier(self, k) for k in self.spec.nodes]

    def squeezing(self):
        """
        Returns:
            list: the squeezing parameter of every seed, in node order.
        """
        return [self.registry[mode_id].r for mode_id in
                self.seed_ids.values()]


def squeezing_per_node(spec, r):
    """
    Expand `r` to one squeezing parameter per node.

    Args:
        r: float, a uniform value, or a sequence with one value per node,
            or a dict node -> value.
    """
    if isinstance(r, dict):
        missing = [k for k in spec.nodes if k not in r]
        if missing:
            error('registry-error',
                  'No squeezing parameter for nodes %s' % missing)
        return [r[k] for k in spec.nodes]

    if isinstance(r, (list, tuple, numpy.ndarray)):
        if len(r) != spec.node_count:
            error('registry-error',
                  'Expected %d squeezing parameters, got %d' %
                  (spec.node_count, len(r)))
        return list(r)

    return [r] * spec.node_count


def seed_cluster(spec, r, registry=None):
    """
    Register one squeezed seed per node of `spec`.

    Returns:
        tuple: the registry and an OrderedDict node id -> seed mode id.
    """
    if registry is None:
        registry = ModeRegistry()

    seed_ids = OrderedDict()
    for k, r_k in zip(spec.nodes, squeezing_per_node(spec, r)):
        seed_ids[k] = registry.add_squeezed(r_k, label='seed%d' % k)

    return registry, seed_ids


def build_canonical(spec, r, registry=None):
    """
    Build the canonical cluster of `spec`.

    Every node starts as a momentum-squeezed vacuum and a QND gate is
    applied along every edge, so that node k ends up with q_k = qbar_k
    and p_k = pbar_k + sum of the qbar_l of its neighbors.

    Args:
        spec: topology.ClusterSpec, the topology.
        r: float or per-node values, see `squeezing_per_node`.
        registry: qalg.ModeRegistry, where to register the seeds, a new
            one by default.
    """
    registry, seed_ids = seed_cluster(spec, r, registry)

    nodes = OrderedDict((k, ModeState.fresh(mode_id))
                        for k, mode_id in seed_ids.items())
    for k, l in sorted(spec.edges):
        nodes[k], nodes[l] = apply_qnd(nodes[k], nodes[l])

    debug('Built canonical %s' % spec.name, 'canonical')

    return ClusterState(spec, nodes, registry, CANONICAL, seed_ids)


def nullifier(state, k):
    """
    The excess-noise operator of node `k`, p_k minus the positions of
    its neighbors.
    """
    spec = state.spec
    return linear_combination(
        [(1.0, state.node(k).p)] +
        [(-1.0, state.node(l).q) for l in sorted(spec.neighbors(k))])


TeleportOutputs = namedtuple('TeleportOutputs',
                             ['q_mu', 'p_mu', 'q_nu', 'p_nu', 'registry'])

OUTPUT_NAMES = ('q_mu', 'p_mu', 'q_nu', 'p_nu')


def uniform_weights(rails):
    """
    Equal weights 1/N over N mid-rails.
    """
    return numpy.full(rails, 1.0 / rails)


def check_weights(eta, rails):
    """
    Validate a weight vector for `rails` mid-rails.

    Weights may be negative, they only need to sum to one.

    Returns:
        numpy.ndarray: the weights, uniform when `eta` is None.
    """
    if eta is None:
        return uniform_weights(rails)

    eta = numpy.asarray(eta, dtype=float)
    if eta.ndim != 1 or len(eta) != rails:
        error('invalid-weights',
              'Expected %d weights, got %s' % (rails, eta.tolist()))
    if not numpy.all(numpy.isfinite(eta)):
        error('invalid-weights', 'Weights must be finite')
    if abs(math.fsum(eta) - 1.0) > DEFAULT_ATOL:
        error('invalid-weights', 'Weights must sum to 1',
              total=math.fsum(eta))
    return eta


def register_inputs(spec, registry, input_moments=None):
    """
    Register one input mode per attachment of `spec`.

    Args:
        input_moments: dict, optional input label -> (<q^2>, <p^2>).

    Returns:
        OrderedDict: input label -> gates.ModeState of the raw input.
    """
    input_moments = input_moments or {}
    res = OrderedDict()
    for label in spec.inputs:
        mode_id = registry.add_coherent(label,
                                        variances=input_moments.get(label))
        res[label] = ModeState.fresh(mode_id)
    return res


def ideal_cz_image(inputs):
    """
    The outputs of an ideal CZ gate on the `inputs`.

    Returns:
        OrderedDict: output name -> OperatorExpr.
    """
    alpha, beta = inputs['alpha'], inputs['beta']
    return OrderedDict([('q_mu', alpha.q),
                        ('p_mu', alpha.p + beta.q),
                        ('q_nu', beta.q),
                        ('p_nu', beta.p + alpha.q)])


def weighted_nullifiers(state, nodes, eta):
    """
    Returns:
        OperatorExpr: sum over `nodes` of eta_k times their nullifier.
    """
    return linear_combination(
        (eta_k, nullifier(state, k)) for eta_k, k in zip(eta, nodes))


def nrail_outputs_canonical(rails, r, eta=None, eta_nu=None,
                            input_moments=None):
    """
    The output quadratures of the CZ teleportation on the canonical
    N-rail cluster.

    q_mu is q_alpha plus the weighted mid-rail nullifiers of the first
    arm, p_mu is p_alpha + q_beta - delta_1 + delta_{N+2}, and the nu
    outputs mirror them.

    Args:
        rails: int, N.
        r: float, the squeezing parameter.
        eta: weights of the first arm's mid-rails, uniform by default.
        eta_nu: weights of the second arm, `eta` by default.

    Returns:
        TeleportOutputs: the four outputs and the registry, holding the
            cluster seeds in node order followed by the inputs.
    """
    eta = check_weights(eta, rails)
    eta_nu = check_weights(eta_nu, rails) if eta_nu is not None else eta

    spec = nrail(rails)
    state = build_canonical(spec, r)
    ideal = ideal_cz_image(register_inputs(spec, state.registry,
                                           input_moments))
    left, right = mid_rails(rails)
    last = spec.node_count

    def delta(k):
        return nullifier(state, k)

    return TeleportOutputs(
        ideal['q_mu'] + weighted_nullifiers(state, left, eta),
        ideal['p_mu'] - delta(1) + delta(rails + 2),
        ideal['q_nu'] + weighted_nullifiers(state, right, eta_nu),
        ideal['p_nu'] - delta(last) + delta(rails + 3),
        state.registry)


def excess_noise(eta, noise_cov):
    """
    Returns:
        float: eta^T C eta.
    """
    eta = numpy.asarray(eta, dtype=float)
    noise_cov = numpy.asarray(noise_cov, dtype=float)
    return float(eta @ noise_cov @ eta)


def arm_noise_covariance(state, nodes):
    """
    The correlators <delta_k delta_l> of the nullifiers of `nodes`.
    """
    return covariance_matrix([nullifier(state, k) for k in nodes],
                             state.registry)


def optimal_weights(noise_cov):
    """
    The unit-sum weights minimizing eta^T C eta.

    With the Lagrange multiplier of the sum constraint, the minimum is
    C^-1 1 / (1^T C^-1 1).

    Args:
        noise_cov: array-like, a symmetric positive-definite matrix.

    Returns:
        numpy.ndarray: the optimal weights.
    """
    noise_cov = numpy.asarray(noise_cov, dtype=float)
    if noise_cov.ndim != 2 or noise_cov.shape[0] != noise_cov.shape[1] or \
            not noise_cov.size:
        error('singular-noise', 'Noise covariance must be a square matrix',
              shape=noise_cov.shape)

    if numpy.max(numpy.abs(noise_cov - noise_cov.T)) > DEFAULT_ATOL * max(
            1.0, numpy.max(numpy.abs(noise_cov))):
        error('singular-noise', 'Noise covariance is not symmetric')

    if numpy.linalg.cond(noise_cov) > 1e12:
        error('singular-noise', 'Noise covariance is singular',
              condition=numpy.linalg.cond(noise_cov))

    try:
        factor = linalg.cho_factor(noise_cov)
    except linalg.LinAlgError as err:
        error('singular-noise',
              'Noise covariance is not positive definite (%s)' % err)

    ones = numpy.ones(noise_cov.shape[0])
    unnormalized = linalg.cho_solve(factor, ones)
    return unnormalized / unnormalized.sum()


def output_commutators(outputs):
    """
    Returns:
        numpy.ndarray: the commutator matrix of (q_mu, p_mu, q_nu, p_nu).
    """
    return commutator_matrix([getattr(outputs, name)
                              for name in OUTPUT_NAMES])


def canonical_commutators():
    """
    The commutator matrix of two independent modes, (q_mu, p_mu, q_nu,
    p_nu) ordering.
    """
    res = numpy.zeros((4, 4))
    res[0, 1] = res[2, 3] = 0.5
    res[1, 0] = res[3, 2] = -0.5
    return res

