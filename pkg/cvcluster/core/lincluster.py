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
Linear-optical clusters.

Offline momentum-squeezed vacua are sent through a passive network U
whose rows u_k = alpha_k + i sum_{l in N_k} alpha_l turn them into a
cluster state. The Gram matrix G of the alpha_k has to satisfy the
geometric constraints G + K G K = I and G K = K G, K being the
adjacency matrix. Those force G = (I + K^2)^-1, so G is unique for every
topology; the least-squares route still flags rank deficiency.
"""

import functools
import math
from collections import OrderedDict, namedtuple

import numpy
from scipy import linalg
from scipy.linalg import lapack

from cvcluster.core.exceptions import ReportedException
from cvcluster.core.canonical import (ClusterState, LINEAR_OPTICAL,
                                      TeleportOutputs, check_weights,
                                      ideal_cz_image, nullifier,
                                      register_inputs, seed_cluster,
                                      weighted_nullifiers)
from cvcluster.core.gates import ModeState, apply_network
from cvcluster.core.qalg import SQUEEZED, covariance_matrix
from cvcluster.core.topology import nrail, mid_rails
from cvcluster.utils.loggable import Logger, error, warn, debug


CONSTRAINT_ATOL = 1e-10
PSD_ATOL = 1e-10
UNITARY_ATOL = 1e-10
NULLIFIER_ATOL = 1e-12

# Least squares over M(M+1)/2 unknowns gets slow beyond that.
LSTSQ_MAX_UNKNOWNS = 1275

PIVOTED = 'pivoted'
EIGEN = 'eigen'
CHOLESKY = 'cholesky'
FRAMES = (PIVOTED, EIGEN, CHOLESKY)

AUTO = 'auto'
LSTSQ = 'lstsq'
DIRECT = 'direct'
METHODS = (AUTO, LSTSQ, DIRECT)


class SynthesisError(ReportedException):
    """
    Raised when no valid network can be synthesized for a topology.
    """
    pass


Logger.register_error_code('synthesis-error', SynthesisError,
                           domain='lincluster')
Logger.register_warning_code('gmatrix-nonunique', SynthesisError,
                             domain='lincluster')


NetworkSynthesis = namedtuple('NetworkSynthesis', ['g', 'alpha', 'u'])


def _unknown_index(node_count):
    index = {}
    for k in range(node_count):
        for l in range(k, node_count):
            index[(k, l)] = len(index)
    return index


def _pair(index, k, l):
    return index[(k, l) if k <= l else (l, k)]


def constraint_system(spec):
    """
    The geometric constraints as a linear system over the distinct
    entries of a symmetric G.

    Rows come in two families: G_kl + sum_{m in N_k, n in N_l} G_mn =
    delta_kl for k <= l, then sum_{n in N_l} G_kn - sum_{m in N_k} G_ml
    = 0 for k < l.

    Returns:
        tuple: the coefficient matrix, the right-hand side and the
            (k, l) -> column index map, nodes counted from 0.
    """
    size = spec.node_count
    index = _unknown_index(size)
    neighbors = [sorted(l - 1 for l in spec.neighbors(k))
                 for k in spec.nodes]

    rows = []
    rhs = []
    for k in range(size):
        for l in range(k, size):
            row = numpy.zeros(len(index))
            row[index[(k, l)]] += 1.0
            for m in neighbors[k]:
                for n in neighbors[l]:
                    row[_pair(index, m, n)] += 1.0
            rows.append(row)
            rhs.append(1.0 if k == l else 0.0)

    for k in range(size):
        for l in range(k + 1, size):
            row = numpy.zeros(len(index))
            for n in neighbors[l]:
                row[_pair(index, k, n)] += 1.0
            for m in neighbors[k]:
                row[_pair(index, m, l)] -= 1.0
            rows.append(row)
            rhs.append(0.0)

    return numpy.array(rows), numpy.array(rhs), index


def geometric_constraint_residual(spec, g):
    """
    Returns:
        float: the worst violation of G + KGK = I and GK = KG.
    """
    g = numpy.asarray(g, dtype=float)
    adjacency = spec.adjacency_matrix()
    eye = numpy.eye(spec.node_count)
    first = g + adjacency @ g @ adjacency - eye
    second = g @ adjacency - adjacency @ g
    return float(max(numpy.max(numpy.abs(first)),
                     numpy.max(numpy.abs(second))))


def _solve_lstsq(spec):
    matrix, rhs, index = constraint_system(spec)
    solution, _, rank, _ = linalg.lstsq(matrix, rhs, lapack_driver='gelsy')

    if rank < len(index):
        warn('gmatrix-nonunique',
             'Geometric constraints of %s leave %d directions free, '
             'using the least-norm solution' %
             (spec.name, len(index) - rank))

    g = numpy.zeros((spec.node_count, spec.node_count))
    for (k, l), column in index.items():
        g[k, l] = g[l, k] = solution[column]
    return g


def _solve_direct(spec):
    adjacency = spec.adjacency_matrix()
    eye = numpy.eye(spec.node_count)
    g = linalg.solve(eye + adjacency @ adjacency, eye, assume_a='pos')
    return (g + g.T) / 2


def solve_geometric_constraints(spec, method=AUTO):
    """
    Solve the geometric constraints of `spec` for G.

    Args:
        spec: topology.ClusterSpec, a connected topology.
        method: str, `LSTSQ` solves the full overdetermined system,
            `DIRECT` inverts I + K^2, `AUTO` picks least squares for
            small topologies.

    Returns:
        numpy.ndarray: the symmetric positive semi-definite G.
    """
    if method not in METHODS:
        error('synthesis-error', 'Unknown solver method %r' % (method,))

    if not spec.is_connected():
        error('synthesis-error',
              'Topology %s is not connected' % spec.name)

    if method == AUTO:
        n_unknowns = spec.node_count * (spec.node_count + 1) // 2
        method = LSTSQ if n_unknowns <= LSTSQ_MAX_UNKNOWNS else DIRECT

    if method == LSTSQ:
        g = _solve_lstsq(spec)
    else:
        g = _solve_direct(spec)

    residual = geometric_constraint_residual(spec, g)
    if residual > CONSTRAINT_ATOL:
        error('synthesis-error',
              'Geometric constraints of %s violated' % spec.name,
              residual=residual)

    smallest = numpy.min(linalg.eigvalsh(g))
    if smallest < -PSD_ATOL:
        error('synthesis-error',
              'G of %s is not positive semi-definite' % spec.name,
              eigenvalue=smallest)

    debug('Solved %s with %s, residual %g' % (spec.name, method, residual),
          'lincluster')

    return g


def _factor_pivoted(g):
    factor, piv, rank, info = lapack.dpstrf(g, lower=1)
    if info < 0:
        error('synthesis-error',
              'Pivoted Cholesky failed on argument %d' % -info)

    lower = numpy.tril(factor)
    lower[:, rank:] = 0.0
    alpha = numpy.zeros_like(lower)
    alpha[piv - 1] = lower
    return alpha


def _factor_eigen(g):
    values, vectors = linalg.eigh(g)
    return vectors * numpy.sqrt(numpy.clip(values, 0.0, None))


def _factor_cholesky(g):
    try:
        return linalg.cholesky(g, lower=True)
    except linalg.LinAlgError:
        debug('G is singular, falling back to its spectral square root',
              'lincluster')
        return _factor_eigen(g)


_FACTORIZERS = {PIVOTED: _factor_pivoted,
                EIGEN: _factor_eigen,
                CHOLESKY: _factor_cholesky}


def factor_alpha(g, frame=PIVOTED, rotation=None):
    """
    Factor G as A A^T, the rows of A being the alpha_k.

    Any two factors differ by an orthogonal matrix on the right, `frame`
    picks one and `rotation` moves to another.

    Args:
        g: array-like, a symmetric positive semi-definite matrix.
        frame: str, one of `FRAMES`.
        rotation: array-like, an optional orthogonal matrix applied on
            the right of the factor.

    Returns:
        numpy.ndarray: A.
    """
    if frame not in _FACTORIZERS:
        error('synthesis-error', 'Unknown factorization frame %r' % (frame,))

    g = numpy.array(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        error('synthesis-error', 'G must be square', shape=g.shape)

    if numpy.max(numpy.abs(g - g.T), initial=0.0) > PSD_ATOL:
        error('synthesis-error', 'G is not symmetric')

    values, vectors = linalg.eigh(g)
    if values.size and values[0] < -PSD_ATOL:
        error('synthesis-error', 'G is not positive semi-definite',
              eigenvalue=values[0])

    clipped = (vectors * numpy.clip(values, 0.0, None)) @ vectors.T
    alpha = _FACTORIZERS[frame]((clipped + clipped.T) / 2)

    if rotation is not None:
        rotation = numpy.asarray(rotation, dtype=float)
        if rotation.shape != g.shape or numpy.max(numpy.abs(
                rotation.T @ rotation - numpy.eye(g.shape[0]))) > PSD_ATOL:
            error('synthesis-error', 'Rotation is not orthogonal')
        alpha = alpha @ rotation

    residual = numpy.max(numpy.abs(alpha @ alpha.T - g), initial=0.0)
    if residual > CONSTRAINT_ATOL:
        error('synthesis-error', 'Factorization does not reproduce G',
              frame=frame, residual=residual)

    return alpha


def unitarity_residual(u):
    """
    Returns:
        float: max |U^dagger U - I|.
    """
    u = numpy.asarray(u, dtype=complex)
    return float(numpy.max(numpy.abs(u.conj().T @ u -
                                     numpy.eye(u.shape[0])), initial=0.0))


def assemble_u(alpha, spec):
    """
    Assemble the network, row k being alpha_k + i sum_{l in N_k} alpha_l.

    Returns:
        numpy.ndarray: the unitary U.
    """
    alpha = numpy.asarray(alpha, dtype=float)
    if alpha.shape != (spec.node_count, spec.node_count):
        error('synthesis-error',
              'Alpha matrix of shape %s does not fit %s' %
              (alpha.shape, spec.name))

    u = alpha + 1j * (spec.adjacency_matrix() @ alpha)

    residual = unitarity_residual(u)
    if residual > UNITARY_ATOL:
        error('synthesis-error', 'Network for %s is not unitary' % spec.name,
              residual=residual)

    return u


def _frozen(array):
    array.setflags(write=False)
    return array


@functools.lru_cache(maxsize=128)
def synthesize_network(spec, frame=PIVOTED):
    """
    Solve, factor and assemble the network of `spec`.

    Results are cached per topology and frame, and read-only.

    Returns:
        NetworkSynthesis: (G, A, U).
    """
    g = solve_geometric_constraints(spec)
    alpha = factor_alpha(g, frame)
    u = assemble_u(alpha, spec)
    return NetworkSynthesis(_frozen(g), _frozen(alpha), _frozen(u))


def build_lo_cluster(spec, r, frame=PIVOTED, unitary=None, registry=None):
    """
    Build the linear-optical cluster of `spec`.

    Args:
        spec: topology.ClusterSpec, the topology.
        r: float or per-node values, see `canonical.squeezing_per_node`.
        frame: str, the factorization frame of the synthesized network.
        unitary: array-like, an explicit network to use instead, it must
            be unitary.
        registry: qalg.ModeRegistry, where to register the seeds.

    Returns:
        canonical.ClusterState: the state, family `LINEAR_OPTICAL`.
    """
    if unitary is None:
        u = synthesize_network(spec, frame).u
    else:
        u = numpy.asarray(unitary, dtype=complex)
        if u.shape != (spec.node_count, spec.node_count):
            error('synthesis-error',
                  'Network of shape %s does not fit %s' %
                  (u.shape, spec.name))
        residual = unitarity_residual(u)
        if residual > UNITARY_ATOL:
            error('synthesis-error', 'Explicit network is not unitary',
                  residual=residual)

    registry, seed_ids = seed_cluster(spec, r, registry)
    seeds = [ModeState.fresh(mode_id) for mode_id in seed_ids.values()]
    nodes = OrderedDict(zip(spec.nodes, apply_network(u, seeds)))

    return ClusterState(spec, nodes, registry, LINEAR_OPTICAL, seed_ids)


def nullifiers_lo(state):
    """
    The nullifiers of a linear-optical cluster, checked to be free of
    anti-squeezed position quadratures.

    Returns:
        list: one OperatorExpr per node.
    """
    squeezed = set(state.registry.ids(SQUEEZED))
    res = []
    for k in state.spec.nodes:
        delta = nullifier(state, k)
        leak = max([abs(coef) for mode_id, coef in delta.qcoef.items()
                    if mode_id in squeezed] or [0.0])
        if leak > NULLIFIER_ATOL:
            error('synthesis-error',
                  'Nullifier %d of %s has anti-squeezed components' %
                  (k, state.spec.name), leak=leak)
        res.append(delta)
    return res


def expected_nullifier_covariance(spec, r):
    """
    Returns:
        numpy.ndarray: (M + I) e^{-2r} / 4, M the common neighbor matrix.
    """
    common = spec.common_neighbor_matrix()
    return (common + numpy.eye(spec.node_count)) * math.exp(-2 * r) / 4


def verify_correlator_identity(state):
    """
    Check that the nullifier correlators of a uniformly squeezed
    linear-optical cluster are (M_kl + delta_kl) e^{-2r} / 4.

    Returns:
        float: the worst absolute residual.
    """
    if state.family != LINEAR_OPTICAL:
        error('synthesis-error',
              'Correlator identity only holds for linear-optical clusters')

    squeezing = set(state.squeezing())
    if len(squeezing) != 1:
        error('synthesis-error',
              'Correlator identity needs uniform squeezing',
              values=sorted(squeezing))

    actual = covariance_matrix(nullifiers_lo(state), state.registry)
    expected = expected_nullifier_covariance(state.spec, squeezing.pop())
    return float(numpy.max(numpy.abs(actual - expected)))


def nrail_outputs_lo(rails, r, eta=None, eta_nu=None, frame=PIVOTED,
                     input_moments=None):
    """
    The output quadratures of the CZ teleportation on the linear-optical
    N-rail cluster.

    q_mu is q_alpha minus the weighted mid-rail nullifiers of the first
    arm, p_mu is p_alpha + q_beta + delta_1 - delta_{N+2}, and the nu
    outputs mirror them.

    Returns:
        canonical.TeleportOutputs: the four outputs and their registry.
    """
    eta = check_weights(eta, rails)
    eta_nu = check_weights(eta_nu, rails) if eta_nu is not None else eta

    spec = nrail(rails)
    state = build_lo_cluster(spec, r, frame=frame)
    ideal = ideal_cz_image(register_inputs(spec, state.registry,
                                           input_moments))
    left, right = mid_rails(rails)
    last = spec.node_count

    def delta(k):
        return nullifier(state, k)

    return TeleportOutputs(
        ideal['q_mu'] - weighted_nullifiers(state, left, eta),
        ideal['p_mu'] + delta(1) - delta(rails + 2),
        ideal['q_nu'] - weighted_nullifiers(state, right, eta_nu),
        ideal['p_nu'] + delta(last) - delta(rails + 3),
        state.registry)
