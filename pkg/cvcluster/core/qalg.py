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
Linear quadrature algebra in the Heisenberg picture.

Every quadrature handled by cvcluster is an `OperatorExpr`: a real linear
combination of the position and momentum quadratures of the base modes
held by a `ModeRegistry`. Base modes are either momentum-squeezed vacua
or independent input modes, and they fully determine all second moments.

Units follow the hbar = 1/2 convention, [q, p] = i/2.
"""

import math
from collections import namedtuple

import numpy

from cvcluster.core.exceptions import ReportedException
from cvcluster.utils.loggable import Logger, error


HBAR = 0.5

VACUUM_VARIANCE = HBAR / 2

SQUEEZED = 'squeezed'
COHERENT = 'coherent'

DEFAULT_ATOL = 1e-12


class RegistryError(ReportedException):
    """
    Raised when a mode id is unknown, or a base mode is ill-defined.
    """
    pass


Logger.register_error_code('registry-error', RegistryError, domain='qalg')


class BaseMode(namedtuple('BaseMode',
                          ['id', 'kind', 'r', 'label', 'qvar', 'pvar'])):
    """
    A base mode of the registry.

    Attributes:
        id: int, position of the mode in its registry.
        kind: str, `SQUEEZED` or `COHERENT`.
        r: float, squeezing parameter of a squeezed vacuum, `None`
            for input modes.
        label: str, a human readable label.
        qvar: float, <q^2> of the mode.
        pvar: float, <p^2> of the mode.
    """
    __slots__ = ()


class ModeRegistry(object):
    """
    Append-only list of base modes.

    Ids are handed out in registration order, starting at 0, so two
    registries filled in the same order are interchangeable.
    """

    def __init__(self):
        self.__modes = []
        self.__by_label = {}

    def __len__(self):
        return len(self.__modes)

    def __iter__(self):
        return iter(self.__modes)

    def __contains__(self, mode_id):
        return isinstance(mode_id, int) and 0 <= mode_id < len(self.__modes)

    def __getitem__(self, mode_id):
        if mode_id not in self:
            error('registry-error', 'Unknown mode id %r' % (mode_id,),
                  registered=len(self.__modes))
        return self.__modes[mode_id]

    def __add_mode(self, kind, r, label, qvar, pvar):
        mode_id = len(self.__modes)
        if label is None:
            label = '%s%d' % (kind, mode_id)
        if label in self.__by_label:
            error('registry-error', 'Label %s is already registered' % label)
        self.__modes.append(BaseMode(mode_id, kind, r, label, qvar, pvar))
        self.__by_label[label] = mode_id
        return mode_id

    def add_squeezed(self, r, label=None):
        """
        Register a momentum-squeezed vacuum mode.

        Args:
            r: float, the squeezing parameter, finite and >= 0.
            label: str, an optional label.

        Returns:
            int: the id of the new mode.
        """
        try:
            r = float(r)
        except (TypeError, ValueError):
            r = math.nan

        if not math.isfinite(r) or r < 0:
            error('registry-error',
                  'Squeezing parameters must be finite and >= 0',
                  r=r)

        return self.__add_mode(SQUEEZED, r, label,
                               VACUUM_VARIANCE * math.exp(2 * r),
                               VACUUM_VARIANCE * math.exp(-2 * r))

    def add_coherent(self, label, variances=None):
        """
        Register an independent input mode.

        Args:
            label: str, the label of the input, for example 'alpha'.
            variances: tuple, optional (<q^2>, <p^2>) pair for inputs
                that are not coherent states. They must respect the
                uncertainty bound.

        Returns:
            int: the id of the new mode.
        """
        if variances is None:
            qvar = pvar = VACUUM_VARIANCE
        else:
            qvar, pvar = (float(v) for v in variances)
            if qvar <= 0 or pvar <= 0 or \
                    qvar * pvar < VACUUM_VARIANCE ** 2 - DEFAULT_ATOL:
                error('registry-error',
                      'Input variances violate the uncertainty bound',
                      label=label, qvar=qvar, pvar=pvar)

        return self.__add_mode(COHERENT, None, label, qvar, pvar)

    def find(self, label):
        """
        Returns:
            int: the id of the mode registered under `label`.
        """
        try:
            return self.__by_label[label]
        except KeyError:
            error('registry-error', 'No mode labeled %s' % label)

    def ids(self, kind=None):
        """
        Ids of the registered modes, optionally restricted to `kind`.
        """
        return [mode.id for mode in self.__modes
                if kind is None or mode.kind == kind]

    def variances(self):
        """
        Returns:
            tuple: two numpy arrays, the <q^2> and <p^2> of every mode.
        """
        qvar = numpy.array([mode.qvar for mode in self.__modes])
        pvar = numpy.array([mode.pvar for mode in self.__modes])
        return qvar, pvar

    def squeezing(self):
        """
        Returns:
            list: the squeezing parameters of the squeezed modes.
        """
        return [mode.r for mode in self.__modes if mode.kind == SQUEEZED]

    def resqueezed(self, r):
        """
        A copy of this registry where every squeezed mode has
        squeezing parameter `r`.

        Ids and labels are preserved, which lets sweeps build their
        operators once and evaluate them at several squeezing values.
        """
        res = ModeRegistry()
        for mode in self.__modes:
            if mode.kind == SQUEEZED:
                res.add_squeezed(r, label=mode.label)
            else:
                res.add_coherent(mode.label,
                                 variances=(mode.qvar, mode.pvar))
        return res

    def check(self, expr):
        """
        Error out if `expr` references modes this registry does not hold.
        """
        unknown = [mode_id for mode_id in expr.mode_ids()
                   if mode_id not in self]
        if unknown:
            error('registry-error',
                  'Expression references unknown modes %s' % sorted(unknown),
                  registered=len(self.__modes))


def _cleaned(coefs):
    res = {}
    for mode_id, coef in coefs.items():
        coef = float(coef)
        if not math.isfinite(coef):
            error('registry-error',
                  'Coefficient for mode %s is not finite' % mode_id)
        if coef != 0.0:
            res[mode_id] = coef
    return res


class OperatorExpr(object):
    """
    An immutable linear combination of base quadratures.

    Absent coefficients are zero, and exact zeros are never stored, so
    two expressions compare equal exactly when their coefficients do.
    """

    __slots__ = ('_q', '_p', '_hash')

    def __init__(self, qcoef=None, pcoef=None):
        self._q = _cleaned(qcoef or {})
        self._p = _cleaned(pcoef or {})
        self._hash = None

    @classmethod
    def q(cls, mode_id, coef=1.0):
        """The position quadrature of base mode `mode_id`"""
        return cls({mode_id: coef}, None)

    @classmethod
    def p(cls, mode_id, coef=1.0):
        """The momentum quadrature of base mode `mode_id`"""
        return cls(None, {mode_id: coef})

    @classmethod
    def zero(cls):
        """The null operator"""
        return cls()

    @property
    def qcoef(self):
        """dict, mode id -> coefficient of the position quadrature"""
        return dict(self._q)

    @property
    def pcoef(self):
        """dict, mode id -> coefficient of the momentum quadrature"""
        return dict(self._p)

    def mode_ids(self):
        """
        Returns:
            set: the ids of all base modes with a nonzero coefficient.
        """
        return set(self._q) | set(self._p)

    def is_zero(self, atol=0.0):
        """
        Whether every coefficient is at most `atol` in absolute value.
        """
        return all(abs(coef) <= atol
                   for coef in list(self._q.values()) +
                   list(self._p.values()))

    @staticmethod
    def __combine(left, right, factor):
        res = dict(left)
        for mode_id, coef in right.items():
            res[mode_id] = res.get(mode_id, 0.0) + factor * coef
        return res

    def __add__(self, other):
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return OperatorExpr(self.__combine(self._q, other._q, 1.0),
                            self.__combine(self._p, other._p, 1.0))

    def __radd__(self, other):
        # Lets sum() start from its integer 0.
        if isinstance(other, (int, float)) and other == 0:
            return self
        return NotImplemented

    def __sub__(self, other):
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return OperatorExpr(self.__combine(self._q, other._q, -1.0),
                            self.__combine(self._p, other._p, -1.0))

    def __neg__(self):
        return self * -1.0

    def __pos__(self):
        return self

    def __mul__(self, scalar):
        if isinstance(scalar, OperatorExpr):
            return NotImplemented
        scalar = float(scalar)
        return OperatorExpr(
            {mode_id: scalar * coef for mode_id, coef in self._q.items()},
            {mode_id: scalar * coef for mode_id, coef in self._p.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / float(scalar))

    def __eq__(self, other):
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        return self._q == other._q and self._p == other._p

    def __ne__(self, other):
        res = self.__eq__(other)
        if res is NotImplemented:
            return res
        return not res

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self._q.items()),
                               frozenset(self._p.items())))
        return self._hash

    def residual(self, other):
        """
        Returns:
            float: the largest absolute coefficient difference with
                `other`.
        """
        diff = self - other
        return max([abs(coef) for coef in
                    list(diff._q.values()) + list(diff._p.values())] or
                   [0.0])

    def isclose(self, other, atol=DEFAULT_ATOL):
        """
        Coefficient-wise comparison with absolute tolerance `atol`.
        """
        return self.residual(other) <= atol

    def restricted(self, ids):
        """
        The part of this expression acting on the modes in `ids`.
        """
        ids = set(ids)
        return OperatorExpr(
            {k: v for k, v in self._q.items() if k in ids},
            {k: v for k, v in self._p.items() if k in ids})

    def dropping(self, ids):
        """
        This expression with every term on the modes in `ids` removed.
        """
        ids = set(ids)
        return OperatorExpr(
            {k: v for k, v in self._q.items() if k not in ids},
            {k: v for k, v in self._p.items() if k not in ids})

    def vectors(self, size):
        """
        Dense coefficient vectors.

        Args:
            size: int, the number of base modes to cover.

        Returns:
            tuple: two numpy arrays of length `size`, the position and
                momentum coefficients.
        """
        qvec = numpy.zeros(size)
        pvec = numpy.zeros(size)
        for mode_id, coef in self._q.items():
            qvec[mode_id] = coef
        for mode_id, coef in self._p.items():
            pvec[mode_id] = coef
        return qvec, pvec

    def __repr__(self):
        return 'OperatorExpr(%s)' % str(self)

    def __str__(self):
        terms = []
        for quad, coefs in (('q', self._q), ('p', self._p)):
            for mode_id in sorted(coefs):
                terms.append('%+.6g %s[%d]' % (coefs[mode_id], quad, mode_id))
        if not terms:
            return '0'
        return ' '.join(terms)


def linear_combination(terms):
    """
    Args:
        terms: iterable of (coefficient, OperatorExpr) pairs.

    Returns:
        OperatorExpr: the weighted sum.
    """
    qcoef = {}
    pcoef = {}
    for factor, expr in terms:
        if factor == 0:
            continue
        # pylint: disable=protected-access
        for mode_id, coef in expr._q.items():
            qcoef[mode_id] = qcoef.get(mode_id, 0.0) + factor * coef
        for mode_id, coef in expr._p.items():
            pcoef[mode_id] = pcoef.get(mode_id, 0.0) + factor * coef
    return OperatorExpr(qcoef, pcoef)


def commutator(a, b, registry=None):
    """
    The commutator of two quadrature expressions.

    Args:
        a: OperatorExpr, the left operand.
        b: OperatorExpr, the right operand.
        registry: ModeRegistry, when given the ids of both operands are
            checked against it.

    Returns:
        float: c such that [a, b] = i c.
    """
    if registry is not None:
        registry.check(a)
        registry.check(b)

    a_q, a_p = a.qcoef, a.pcoef
    b_q, b_p = b.qcoef, b.pcoef

    qp_sum = math.fsum(coef * b_p[mode_id] for mode_id, coef in a_q.items()
                       if mode_id in b_p)
    pq_sum = math.fsum(coef * b_q[mode_id] for mode_id, coef in a_p.items()
                       if mode_id in b_q)

    return HBAR * (qp_sum - pq_sum)


def second_moment(a, b, registry):
    """
    The symmetrized second moment <{a, b}>/2 of two centered quadrature
    expressions.

    Distinct base modes are uncorrelated and every base mode has no
    position-momentum cross correlation, so only the diagonal
    variances of `registry` contribute.
    """
    registry.check(a)
    registry.check(b)

    a_q, a_p = a.qcoef, a.pcoef
    b_q, b_p = b.qcoef, b.pcoef

    res = 0.0
    for mode_id, coef in a_q.items():
        if mode_id in b_q:
            res += coef * b_q[mode_id] * registry[mode_id].qvar
    for mode_id, coef in a_p.items():
        if mode_id in b_p:
            res += coef * b_p[mode_id] * registry[mode_id].pvar
    return res


def _coefficient_matrices(ops, size):
    qmat = numpy.zeros((len(ops), size))
    pmat = numpy.zeros((len(ops), size))
    for row, expr in enumerate(ops):
        qmat[row], pmat[row] = expr.vectors(size)
    return qmat, pmat


def covariance_matrix(ops, registry):
    """
    The matrix of pairwise second moments of `ops`.

    Returns:
        numpy.ndarray: a symmetric len(ops) x len(ops) matrix.
    """
    for expr in ops:
        registry.check(expr)

    qvar, pvar = registry.variances()
    qmat, pmat = _coefficient_matrices(ops, len(registry))
    res = (qmat * qvar) @ qmat.T + (pmat * pvar) @ pmat.T
    return (res + res.T) / 2


def commutator_matrix(ops):
    """
    The matrix of pairwise commutators of `ops`, entry (i, j) being c
    in [ops[i], ops[j]] = i c.

    Returns:
        numpy.ndarray: an antisymmetric len(ops) x len(ops) matrix.
    """
    size = 1 + max([max(expr.mode_ids()) for expr in ops
                    if expr.mode_ids()] or [0])
    qmat, pmat = _coefficient_matrices(ops, size)
    return HBAR * (qmat @ pmat.T - pmat @ qmat.T)
