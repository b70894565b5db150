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

# pylint: disable=missing-docstring
# pylint: disable=invalid-name
import math
import unittest

import numpy
from hypothesis import given, settings
from hypothesis import strategies as st

from cvcluster.core.canonical import (CANONICAL, FamilyError, WeightError,
                                      arm_noise_covariance, build_canonical,
                                      canonical_commutators, check_family,
                                      check_weights, excess_noise,
                                      ideal_cz_image, nrail_outputs_canonical,
                                      nullifier, optimal_weights,
                                      output_commutators, register_inputs,
                                      squeezing_per_node, uniform_weights)
from cvcluster.core.lincluster import nrail_outputs_lo
from cvcluster.core.qalg import (SQUEEZED, OperatorExpr, RegistryError,
                                 ModeRegistry, second_moment)
from cvcluster.core.topology import (TopologyError, linear_chain, mid_rails,
                                     nrail)
from cvcluster.utils.loggable import Logger


class TestCanonicalCluster(unittest.TestCase):
    def setUp(self):
        Logger.reset()
        Logger.silent = True

    def test_build(self):
        state = build_canonical(linear_chain(4), 0.5)
        self.assertEqual(state.family, CANONICAL)
        self.assertEqual(list(state.seed_ids.items()),
                         [(1, 0), (2, 1), (3, 2), (4, 3)])
        node = state.node(2)
        self.assertEqual(node.q, OperatorExpr.q(1))
        self.assertEqual(node.p, OperatorExpr({0: 1.0, 2: 1.0}, {1: 1.0}))
        self.assertEqual(state.squeezing(), [0.5] * 4)
        with self.assertRaises(TopologyError):
            state.node(5)

    def test_nullifiers(self):
        state = build_canonical(nrail(3), 0.7)
        for k in state.spec.nodes:
            seed = state.seed_ids[k]
            self.assertEqual(nullifier(state, k), OperatorExpr.p(seed))
            self.assertAlmostEqual(
                second_moment(state.nullifier(k), state.nullifier(k),
                              state.registry),
                math.exp(-1.4) / 4, places=15)
        self.assertEqual(len(state.nullifiers()), 10)

    def test_per_node_squeezing(self):
        spec = linear_chain(3, 'inner')
        self.assertEqual(squeezing_per_node(spec, 0.1), [0.1] * 3)
        self.assertEqual(squeezing_per_node(spec, {1: 0.1, 2: 0.2, 3: 0.3}),
                         [0.1, 0.2, 0.3])
        state = build_canonical(spec, [0.0, 0.5, 1.0])
        self.assertEqual(state.squeezing(), [0.0, 0.5, 1.0])
        with self.assertRaises(RegistryError):
            squeezing_per_node(spec, {1: 0.1})
        with self.assertRaises(RegistryError):
            squeezing_per_node(spec, [0.1, 0.2])
        with self.assertRaises(RegistryError):
            build_canonical(spec, -1.0)

    def test_family(self):
        self.assertEqual(check_family('lo'), 'lo')
        with self.assertRaises(FamilyError):
            check_family('photonic')

    def test_inputs(self):
        spec = linear_chain(4)
        state = build_canonical(spec, 0.2)
        inputs = register_inputs(spec, state.registry,
                                 {'beta': (0.5, 0.125)})
        self.assertEqual(list(inputs), ['alpha', 'beta'])
        self.assertEqual(state.registry.find('alpha'), 4)
        self.assertEqual(state.registry[5].qvar, 0.5)

        ideal = ideal_cz_image(inputs)
        self.assertEqual(ideal['p_mu'], OperatorExpr({5: 1.0}, {4: 1.0}))
        self.assertEqual(ideal['q_nu'], OperatorExpr.q(5))


class TestWeights(unittest.TestCase):
    def setUp(self):
        Logger.reset()
        Logger.silent = True

    def test_check_weights(self):
        numpy.testing.assert_array_equal(check_weights(None, 4),
                                         uniform_weights(4))
        numpy.testing.assert_array_equal(check_weights([1.5, -0.5], 2),
                                         [1.5, -0.5])
        with self.assertRaises(WeightError):
            check_weights([0.5, 0.5], 3)
        with self.assertRaises(WeightError):
            check_weights([0.5, 0.6], 2)
        with self.assertRaises(WeightError):
            check_weights([math.nan, 1.0], 2)
        with self.assertRaises(WeightError):
            check_weights([[1.0]], 1)

    def test_optimal_weights(self):
        numpy.testing.assert_allclose(optimal_weights(numpy.diag([1.0, 2.0])),
                                      [2 / 3, 1 / 3], rtol=1e-14)
        numpy.testing.assert_allclose(optimal_weights(numpy.eye(5)),
                                      uniform_weights(5), rtol=1e-14)

    def test_optimal_weights_invalid(self):
        with self.assertRaises(WeightError):
            optimal_weights(numpy.ones(3))
        with self.assertRaises(WeightError):
            optimal_weights([[1.0, 0.5], [0.0, 1.0]])
        with self.assertRaises(WeightError):
            optimal_weights(numpy.ones((2, 2)))
        with self.assertRaises(WeightError):
            optimal_weights([[1.0, 2.0], [2.0, 1.0]])

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
    def test_optimal_is_minimal(self, size, seed):
        rng = numpy.random.default_rng(seed)
        factor = rng.normal(size=(size, size))
        cov = factor @ factor.T + numpy.eye(size)
        best = optimal_weights(cov)
        self.assertAlmostEqual(best.sum(), 1.0, places=12)

        perturbation = rng.normal(size=size)
        perturbation -= perturbation.mean()
        self.assertLessEqual(excess_noise(best, cov),
                             excess_noise(best + 0.1 * perturbation, cov) +
                             1e-12)

    def test_canonical_arm_noise(self):
        state = build_canonical(nrail(4), 0.3)
        left, _ = mid_rails(4)
        cov = arm_noise_covariance(state, left)
        numpy.testing.assert_allclose(cov, numpy.eye(4) * math.exp(-0.6) / 4,
                                      rtol=1e-15)
        numpy.testing.assert_allclose(optimal_weights(cov),
                                      uniform_weights(4), rtol=1e-14)
        self.assertAlmostEqual(excess_noise(uniform_weights(4), cov),
                               math.exp(-0.6) / 16, places=15)


class TestCanonicalOutputs(unittest.TestCase):
    def setUp(self):
        Logger.reset()
        Logger.silent = True

    def test_registry_order(self):
        outputs = nrail_outputs_canonical(2, 0.4)
        registry = outputs.registry
        self.assertEqual([mode.label for mode in registry],
                         ['seed%d' % k for k in range(1, 9)] +
                         ['alpha', 'beta'])

    def test_single_rail(self):
        outputs = nrail_outputs_canonical(1, 0.4)
        alpha, beta = 6, 7
        # q_mu = q_alpha + pbar_2
        self.assertTrue(outputs.q_mu.isclose(
            OperatorExpr({alpha: 1.0}, {1: 1.0})))
        # p_mu = p_alpha + q_beta - pbar_1 + pbar_3
        self.assertTrue(outputs.p_mu.isclose(
            OperatorExpr({beta: 1.0}, {alpha: 1.0, 0: -1.0, 2: 1.0})))
        self.assertTrue(outputs.q_nu.isclose(
            OperatorExpr({beta: 1.0}, {4: 1.0})))

    def test_excess_noise(self):
        rails, r = 3, 0.6
        outputs = nrail_outputs_canonical(rails, r)
        registry = outputs.registry
        seed_var = math.exp(-2 * r) / 4

        q_mu = second_moment(outputs.q_mu, outputs.q_mu, registry)
        self.assertAlmostEqual(q_mu, 0.25 + seed_var / rails, places=14)
        p_mu = second_moment(outputs.p_mu, outputs.p_mu, registry)
        self.assertAlmostEqual(p_mu, 0.5 + 2 * seed_var, places=14)

        weighted = nrail_outputs_canonical(rails, r, eta=[1.0, 0.0, 0.0])
        q_mu = second_moment(weighted.q_mu, weighted.q_mu, weighted.registry)
        self.assertAlmostEqual(q_mu, 0.25 + seed_var, places=14)

    def test_commutators(self):
        for rails in (1, 2, 5):
            outputs = nrail_outputs_canonical(rails, 1.0,
                                              eta=None,
                                              eta_nu=[1.0] + [0.0] *
                                              (rails - 1))
            numpy.testing.assert_allclose(output_commutators(outputs),
                                          canonical_commutators(),
                                          atol=1e-12)

    def test_input_moments(self):
        outputs = nrail_outputs_canonical(1, 0.0,
                                          input_moments={'alpha': (1.0, 1.0)})
        registry = outputs.registry
        self.assertEqual(registry[registry.find('alpha')].qvar, 1.0)
        self.assertIsInstance(registry, ModeRegistry)

    def test_no_antisqueezed_quadratures(self):
        for outputs in (nrail_outputs_canonical(3, 0.5),
                        nrail_outputs_lo(3, 0.5)):
            seeds = set(outputs.registry.ids(SQUEEZED))
            for out in outputs[:4]:
                for mode_id, coef in out.qcoef.items():
                    if mode_id in seeds:
                        self.assertAlmostEqual(coef, 0.0, places=12)

    def test_invalid_weights(self):
        with self.assertRaises(WeightError):
            nrail_outputs_canonical(2, 0.3, eta=[1.0])


if __name__ == '__main__':
    unittest.main()
