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
import json
import math
import unittest

from cvcluster.core.canonical import (CANONICAL, LINEAR_OPTICAL, OUTPUT_NAMES,
                                      nrail_outputs_canonical)
from cvcluster.core.entangle import (L4, L4_OUTER, correlators_closed,
                                     en_closed)
from cvcluster.core.lincluster import EIGEN, nrail_outputs_lo
from cvcluster.core.teleport import (BEAMSPLITTER, FT, INVERSE_FOURIER,
                                     SQRT2, Scenario, ScenarioError, Term,
                                     builtin_scenarios, export_catalog,
                                     format_terms, get_scenario,
                                     nrail_scenario, parse_terms,
                                     run_scenario, scenario_correlators,
                                     scenario_log_negativity,
                                     verify_ft_cluster_equivalence)
from cvcluster.core.topology import linear_chain
from cvcluster.utils.loggable import Logger


L4_DEFINITIONS = {'q_mu': "p_1 - p_alpha''",
                  'p_mu': "-q_1 - p_beta'' + p_2'",
                  'q_nu': "p_4 - p_beta''",
                  'p_nu': "-q_4 - p_alpha'' + p_3'"}

L4_NOISE = {'q_mu': {1: 1.0}, 'p_mu': {2: 1.0},
            'q_nu': {4: 1.0}, 'p_nu': {3: 1.0}}


def l4_variant(**overrides):
    definitions = dict(L4_DEFINITIONS)
    definitions.update(overrides)
    return Scenario('L4-variant', CANONICAL, linear_chain(4), definitions,
                    L4_NOISE, '', input_prep=INVERSE_FOURIER)


class TestTerms(unittest.TestCase):
    def setUp(self):
        Logger.reset()
        Logger.silent = True

    def test_parse(self):
        terms = parse_terms("-q_2 + sqrt2 p_alpha1 + 1/2 p_3'")
        self.assertEqual(terms, [Term(-1.0, 'q', 2, 0),
                                 Term(SQRT2, 'p', 'alpha1', 0),
                                 Term(0.5, 'p', 3, 1)])
        self.assertEqual(parse_terms("2.5*q_beta''"),
                         [Term(2.5, 'q', 'beta', 2)])

    def test_parse_invalid(self):
        for text in ('', 'q_2 q_3', 'x_2', 'q_2 +', '+ q_'):
            with self.assertRaises(ScenarioError, msg=text):
                parse_terms(text)

    def test_label(self):
        self.assertEqual(Term(1.0, 'p', 'alpha', 2).label, "p_alpha''")
        self.assertEqual(Term(1.0, 'q', 12, 0).label, 'q_12')

    def test_format(self):
        for text in ("p_1 + sqrt2 q_alpha2", "-q_4 + 2 p_3'",
                     "-q_1 - p_beta'' + p_2'"):
            self.assertEqual(format_terms(parse_terms(text)), text)
        self.assertEqual(format_terms([Term(0.25, 'q', 1, 0)]), '0.25 q_1')


class TestScenario(unittest.TestCase):
    def setUp(self):
        Logger.reset()
        Logger.silent = True

    def test_measured_ops(self):
        scenario = builtin_scenarios()[L4]
        self.assertEqual(scenario.measured_ops,
                         ("p_alpha''", "p_beta''", "p_2'", "p_3'"))
        self.assertTrue(all(term.coef == 1.0
                            for term in scenario.measured_terms()))

    def test_lo_measured_ops(self):
        scenario = builtin_scenarios()['L4-lo']
        self.assertEqual(set(scenario.measured_ops),
                         {'q_alpha2', 'p_alpha1', 'q_beta2', 'p_beta1'})

    def test_validation(self):
        spec = linear_chain(4)
        with self.assertRaises(ScenarioError):
            Scenario('x', CANONICAL, spec, L4_DEFINITIONS, L4_NOISE, '',
                     coupling='swap')
        with self.assertRaises(ScenarioError):
            Scenario('x', CANONICAL, spec, L4_DEFINITIONS, L4_NOISE, '',
                     nullifier_form=FT)
        with self.assertRaises(ScenarioError):
            Scenario('x', CANONICAL, spec, L4_DEFINITIONS, L4_NOISE, '',
                     input_prep='squeeze')
        with self.assertRaises(ScenarioError):
            Scenario('x', CANONICAL, linear_chain(5), L4_DEFINITIONS,
                     L4_NOISE, '')
        definitions = dict(L4_DEFINITIONS)
        del definitions['p_nu']
        with self.assertRaises(ScenarioError):
            Scenario('x', CANONICAL, spec, definitions, L4_NOISE, '')

    def test_to_dict(self):
        document = builtin_scenarios()['L4-lo'].to_dict()
        self.assertEqual(document['coupling'], BEAMSPLITTER)
        self.assertEqual(document['definitions']['q_mu'],
                         'p_1 + sqrt2 q_alpha2')
        self.assertEqual(document['noise']['p_mu'], {'2': 1.0})
        self.assertEqual(document['topology']['outputs'], [1, 4])
        json.dumps(document)

    def test_catalog(self):
        catalog = builtin_scenarios(rails=(5,))
        self.assertEqual(list(catalog)[:4],
                         [L4_OUTER, L4, 'L4-lo', 'L4-ft'])
        for name in ('L6', '2R', '3R', '5R', 'L6-lo', '2R-lo', '5R-lo'):
            self.assertIn(name, catalog)
        self.assertEqual(catalog['L6'].spec, linear_chain(6))

    def test_get_scenario(self):
        self.assertEqual(get_scenario('L4').name, L4)
        scenario = get_scenario('7R-lo')
        self.assertEqual(scenario.family, LINEAR_OPTICAL)
        self.assertEqual(scenario.spec.node_count, 18)
        for name in ('0R', '7R-canonical', 'ring'):
            with self.assertRaises(ScenarioError):
                get_scenario(name)


class TestRunScenario(unittest.TestCase):
    def setUp(self):
        Logger.reset()
        Logger.silent = True

    def test_catalog_identities(self):
        for scenario in builtin_scenarios(rails=(4, 7)).values():
            for r in (0.0, 0.4, 1.7):
                result = run_scenario(scenario, r)
                self.assertLessEqual(result.residual, 1e-12,
                                     '%s at r=%g' % (scenario.name, r))
                self.assertEqual(list(result.noise), list(OUTPUT_NAMES))

    def test_closed_forms(self):
        for r in (0.3, 1.1):
            for name, family, rails in ((L4, CANONICAL, L4),
                                        (L4_OUTER, CANONICAL, L4_OUTER),
                                        ('L4-lo', LINEAR_OPTICAL, L4),
                                        ('L4-ft', CANONICAL, L4),
                                        ('L6', CANONICAL, 1),
                                        ('3R', CANONICAL, 3),
                                        ('L6-lo', LINEAR_OPTICAL, 1),
                                        ('2R-lo', LINEAR_OPTICAL, 2)):
                corr = scenario_correlators(get_scenario(name), r)
                expected = correlators_closed(family, rails, r)
                for left, right in zip(corr, expected):
                    self.assertAlmostEqual(left, right, delta=1e-12,
                                           msg='%s at r=%g' % (name, r))
            self.assertAlmostEqual(
                scenario_log_negativity(get_scenario(L4), r),
                en_closed(CANONICAL, L4, r), delta=1e-10)

    def test_matches_direct_outputs(self):
        for rails in (1, 2, 3):
            for family, direct in ((CANONICAL, nrail_outputs_canonical),
                                   (LINEAR_OPTICAL, nrail_outputs_lo)):
                outputs = run_scenario(nrail_scenario(family, rails),
                                       0.9).outputs
                expected = direct(rails, 0.9)
                for name in OUTPUT_NAMES:
                    self.assertTrue(getattr(outputs, name).isclose(
                        getattr(expected, name)),
                                    '%s %dR %s' % (family, rails, name))

    def test_eigen_frame(self):
        result = run_scenario(get_scenario('L4-lo'), 0.6, frame=EIGEN)
        self.assertLessEqual(result.residual, 1e-12)

    def test_input_moments(self):
        result = run_scenario(get_scenario(L4), 0.6,
                              input_moments={'alpha': (2.0, 0.5),
                                             'beta': (2.0, 0.5)})
        self.assertLessEqual(result.residual, 1e-12)
        registry = result.outputs.registry
        self.assertEqual(registry[registry.find('beta')].qvar, 2.0)

    def test_broken_identity(self):
        with self.assertRaises(ScenarioError):
            run_scenario(l4_variant(q_mu="p_1 + p_alpha''"), 0.5)

    def test_wrong_stage(self):
        with self.assertRaises(ScenarioError):
            run_scenario(l4_variant(q_mu="p_1 - p_alpha'"), 0.5)

    def test_unknown_mode(self):
        with self.assertRaises(ScenarioError):
            run_scenario(l4_variant(q_mu="p_1 - p_gamma''"), 0.5)

    def test_both_quadratures(self):
        with self.assertRaises(ScenarioError):
            run_scenario(l4_variant(q_mu="p_1 - p_alpha'' + q_alpha''"),
                         0.5)

    def test_consumed_mode(self):
        scenario = builtin_scenarios()['L4-lo']
        definitions = {name: format_terms(terms)
                       for name, terms in scenario.definitions.items()}
        definitions['q_mu'] = 'p_1 + sqrt2 q_alpha'
        broken = Scenario('L4-lo-broken', LINEAR_OPTICAL, scenario.spec,
                          definitions, scenario.noise, '',
                          coupling=BEAMSPLITTER)
        with self.assertRaises(ScenarioError):
            run_scenario(broken, 0.5)


class TestFourierCluster(unittest.TestCase):
    def setUp(self):
        Logger.reset()
        Logger.silent = True

    def test_equivalence(self):
        for r in (0.0, 0.5, 2.0):
            result = verify_ft_cluster_equivalence(r)
            self.assertLessEqual(result.residual, 1e-12)
            for left, right in zip(result.ft, result.reference):
                self.assertAlmostEqual(left, right, delta=1e-12)


class TestExport(unittest.TestCase):
    def setUp(self):
        Logger.reset()
        Logger.silent = True

    def test_export(self):
        scenarios = list(builtin_scenarios().values())
        entries = export_catalog(scenarios, r=0.5)
        self.assertEqual([entry['name'] for entry in entries],
                         [scenario.name for scenario in scenarios])
        for entry in entries:
            self.assertLessEqual(entry['residual'], 1e-12)
            self.assertTrue(math.isfinite(entry['log_negativity']))
            self.assertEqual(set(entry['correlators']), {'a', 'b', 'c'})
        json.loads(json.dumps(entries))

        bare = export_catalog(scenarios[:1])
        self.assertNotIn('r', bare[0])


if __name__ == '__main__':
    unittest.main()
