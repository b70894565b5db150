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
Gaussian gates acting on Heisenberg-picture mode states.

Gates never mutate their arguments, they return new `ModeState`s.
"""

import math
from collections import namedtuple

import numpy

from cvcluster.core.exceptions import ReportedException
from cvcluster.core.qalg import (OperatorExpr, HBAR, DEFAULT_ATOL,
                                 commutator, linear_combination)
from cvcluster.utils.loggable import Logger, error


SQRT1_2 = 1 / math.sqrt(2)


class GateError(ReportedException):
    """
    Raised when a gate is applied to an incompatible set of modes.
    """
    pass


Logger.register_error_code('dimension-mismatch', GateError, domain='gates')


class ModeState(namedtuple('ModeState', ['q', 'p'])):
    """
    The current quadratures of one mode.

    Attributes:
        q: OperatorExpr, the position quadrature.
        p: OperatorExpr, the momentum quadrature.
    """
    __slots__ = ()

    @classmethod
    def fresh(cls, mode_id):
        """The untouched quadratures of base mode `mode_id`"""
        return cls(OperatorExpr.q(mode_id), OperatorExpr.p(mode_id))

    def quadrature(self, quad):
        """
        Args:
            quad: str, 'q' or 'p'.
        """
        if quad not in ('q', 'p'):
            error('dimension-mismatch', 'Unknown quadrature %r' % (quad,))
        return getattr(self, quad)


def apply_qnd(a, b):
    """
    The QND (CZ) coupling of two modes.

    Positions are left untouched, each momentum picks up the position
    of the other mode.

    Returns:
        tuple: the two new `ModeState`s, in argument order.
    """
    return (ModeState(a.q, a.p + b.q),
            ModeState(b.q, b.p + a.q))


def apply_beamsplitter_5050(a, b):
    """
    A balanced beam splitter.

    Returns:
        tuple: ((a + b) / sqrt(2), (a - b) / sqrt(2)) for both quadratures.
    """
    return (ModeState((a.q + b.q) * SQRT1_2, (a.p + b.p) * SQRT1_2),
            ModeState((a.q - b.q) * SQRT1_2, (a.p - b.p) * SQRT1_2))


def apply_fourier(a, inverse=False):
    """
    The Fourier gate, (q, p) -> (-p, q), or its inverse
    (q, p) -> (p, -q).
    """
    if inverse:
        return ModeState(a.p, -a.q)
    return ModeState(-a.p, a.q)


def apply_network(u, seeds):
    """
    Apply a passive linear-optical network.

    Writing u = A + iB, output k has
    q_k = sum_l (A_kl q_l - B_kl p_l) and p_k = sum_l (A_kl p_l + B_kl q_l).

    Args:
        u: array-like, a square complex matrix, its unitarity is left to
            the caller.
        seeds: list of `ModeState`, one per column of `u`.

    Returns:
        list: the output `ModeState`s, one per row of `u`.
    """
    u = numpy.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[1] != len(seeds):
        error('dimension-mismatch',
              'Network of shape %s cannot act on %d modes' %
              (u.shape, len(seeds)))

    real, imag = u.real, u.imag
    res = []
    for row in range(u.shape[0]):
        q_terms = []
        p_terms = []
        for col, seed in enumerate(seeds):
            q_terms.append((real[row, col], seed.q))
            q_terms.append((-imag[row, col], seed.p))
            p_terms.append((real[row, col], seed.p))
            p_terms.append((imag[row, col], seed.q))
        res.append(ModeState(linear_combination(q_terms),
                             linear_combination(p_terms)))
    return res


def network_symplectic(u):
    """
    The real symplectic matrix of a passive network acting on the
    (q_1..q_M, p_1..p_M) ordering.
    """
    u = numpy.asarray(u, dtype=complex)
    return numpy.block([[u.real, -u.imag], [u.imag, u.real]])


def symplectic_form(n_modes):
    """
    The symplectic form for the (q_1..q_M, p_1..p_M) ordering, scaled so
    that it matches the commutators [q_k, p_k] = i / 2.
    """
    eye = numpy.eye(n_modes)
    zeros = numpy.zeros((n_modes, n_modes))
    return HBAR * numpy.block([[zeros, eye], [-eye, zeros]])


def is_physical(state, atol=DEFAULT_ATOL):
    """
    Whether the canonical commutator [q, p] = i / 2 holds for `state`.
    """
    return abs(commutator(state.q, state.p) - HBAR) <= atol
