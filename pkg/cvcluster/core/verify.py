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
Verification suites.

Each suite checks one family of identities the engine relies on and
reports the worst residual it met. Suites declare the suites they build
upon; requesting a suite also runs its dependencies, and a suite whose
dependency failed is reported as failed without running.
"""

import math
from collections import OrderedDict, namedtuple

import numpy
from scipy.stats import unitary_group
from toposort import toposort_flatten

from cvcluster.core.canonical import (CANONICAL, FAMILIES, LINEAR_OPTICAL,
                                      OUTPUT_NAMES, arm_noise_covariance,
                                      build_canonical, canonical_commutators,
                                      excess_noise, nrail_outputs_canonical,
                                      optimal_weights, output_commutators,
                                      uniform_weights)
from cvcluster.core.entangle import (L4, L4_OUTER, R_BRACKET, Correlators,
                                     correlators_closed, covariance_x,
                                     en_closed, entanglement_threshold,
                                     log_negativity, optimal_gain,
                                     pipeline_sweep, rbar, symplectic_pt,
                                     symplectic_pt_generic, witness_wg)
from cvcluster.core.exceptions import CVClusterException, ReportedException
from cvcluster.core.gates import (ModeState, apply_beamsplitter_5050,
                                  apply_fourier, apply_network, apply_qnd,
                                  symplectic_form)
from cvcluster.core.lincluster import (CONSTRAINT_ATOL, EIGEN,
                                       NULLIFIER_ATOL, PIVOTED,
                                       UNITARY_ATOL, build_lo_cluster,
                                       geometric_constraint_residual,
                                       nrail_outputs_lo, nullifiers_lo,
                                       solve_geometric_constraints,
                                       synthesize_network, unitarity_residual,
                                       verify_correlator_identity)
from cvcluster.core.qalg import (DEFAULT_ATOL, SQUEEZED, VACUUM_VARIANCE,
                                 ModeRegistry, commutator_matrix,
                                 covariance_matrix)
from cvcluster.core.reference import G_FIXTURES, RBAR_TABLE, RBAR_TOLERANCE
from cvcluster.core.teleport import (builtin_scenarios, nrail_scenario,
                                     run_scenario,
                                     verify_ft_cluster_equivalence)
from cvcluster.core.topology import mid_rails, nrail, topology_from_name
from cvcluster.utils.configurable import Configurable
from cvcluster.utils.loggable import Logger, error, info
from cvcluster.utils.signals import Signal
from cvcluster.utils.utils import all_subclasses


ALL = 'all'

SEED = 1729

MAX_RAILS = 20

CORRELATOR_SQUEEZING = (0.2, 0.7, 1.5)

CLOSED_FORM_RAILS = tuple(range(1, 11)) + (100,)

CLOSED_FORM_ATOL = 1e-10

THRESHOLD_ATOL = 1e-6


class SuiteError(ReportedException):
    """
    Raised for unknown suite names.
    """
    pass


Logger.register_error_code('unknown-suite', SuiteError, domain='verify')


SuiteResult = namedtuple('SuiteResult',
                         ['name', 'passed', 'worst_residual', 'details'])


class VerificationSuite(object):
    """
    Base class for the suites.

    Subclasses set `suite_name`, optionally `depends_on`, and implement
    `run`, calling `check` and `expect` for every identity.
    """

    suite_name = None
    depends_on = ()

    def __init__(self):
        self.worst = 0.0
        self.passed = True
        self.details = []

    def check(self, label, residual, tolerance):
        """
        Record `residual`, failing the suite when it exceeds
        `tolerance`. NaN residuals fail.
        """
        residual = float(residual)
        if math.isnan(residual) or residual > tolerance:
            self.passed = False
            self.details.append('%s: residual %.3g above %.3g' %
                                (label, residual, tolerance))
        if not math.isnan(residual):
            self.worst = max(self.worst, residual)

    def expect(self, label, condition):
        """
        Fail the suite unless `condition` holds.
        """
        if not condition:
            self.passed = False
            self.details.append('%s does not hold' % label)

    def fail(self, message):
        """Record a failed check with `message`"""
        self.passed = False
        self.details.append(message)

    def run(self):
        """
        Run the checks.
        """
        raise NotImplementedError

    def result(self):
        """
        Returns:
            SuiteResult: the outcome.
        """
        return SuiteResult(self.suite_name, self.passed, self.worst,
                           list(self.details))


class GMatrixSuite(VerificationSuite):
    """
    The constraint solver against the published G matrices.
    """
    suite_name = 'gmatrix'

    def run(self):
        for name, expected in G_FIXTURES.items():
            spec = topology_from_name(name)
            g = solve_geometric_constraints(spec)
            self.check('G of %s' % name,
                       numpy.max(numpy.abs(g - expected)), CONSTRAINT_ATOL)
            self.check('constraints of %s' % name,
                       geometric_constraint_residual(spec, g),
                       CONSTRAINT_ATOL)


def _unitarity_topologies():
    for name in G_FIXTURES:
        yield topology_from_name(name)
    for rails in range(1, MAX_RAILS + 1):
        yield nrail(rails)


class UnitaritySuite(VerificationSuite):
    """
    Synthesized networks are unitary and give q-free nullifiers.
    """
    suite_name = 'unitarity'
    depends_on = ('gmatrix',)

    def run(self):
        for spec in _unitarity_topologies():
            synthesis = synthesize_network(spec)
            self.check('U of %s' % spec.name,
                       unitarity_residual(synthesis.u), UNITARY_ATOL)

            state = build_lo_cluster(spec, 1.0)
            squeezed = set(state.registry.ids(SQUEEZED))
            leak = max([abs(coef) for delta in nullifiers_lo(state)
                        for mode_id, coef in delta.qcoef.items()
                        if mode_id in squeezed] or [0.0])
            self.check('nullifier leak of %s' % spec.name, leak,
                       NULLIFIER_ATOL)


class CorrelatorSuite(VerificationSuite):
    """
    Nullifier correlators of linear-optical N-rail clusters, in two
    factorization frames.
    """
    suite_name = 'correlators'
    depends_on = ('unitarity',)

    def run(self):
        for rails in range(1, MAX_RAILS + 1):
            spec = nrail(rails)
            for r in CORRELATOR_SQUEEZING:
                covariances = []
                for frame in (PIVOTED, EIGEN):
                    state = build_lo_cluster(spec, r, frame=frame)
                    self.check('correlators of %s, r=%g, %s frame' %
                               (spec.name, r, frame),
                               verify_correlator_identity(state),
                               DEFAULT_ATOL)
                    covariances.append(covariance_matrix(
                        nullifiers_lo(state), state.registry))
                self.check('frame independence of %s, r=%g' %
                           (spec.name, r),
                           numpy.max(numpy.abs(covariances[0] -
                                               covariances[1])),
                           DEFAULT_ATOL)


class ScenarioSuite(VerificationSuite):
    """
    Every catalog scenario verifies its identities, N-rail scenarios
    agree with the direct N-rail outputs, and the Fourier-transformed
    cluster variant reproduces the plain one.
    """
    suite_name = 'scenarios'
    depends_on = ('unitarity',)

    def run(self):
        rng = numpy.random.default_rng(SEED)
        for scenario in builtin_scenarios(rails=range(1, 11)).values():
            r = float(rng.uniform(0.0, 3.0))
            result = run_scenario(scenario, r)
            self.check('%s at r=%.3f' % (scenario.name, r), result.residual,
                       DEFAULT_ATOL)

        for rails in (1, 2, 3):
            for family, direct in ((CANONICAL, nrail_outputs_canonical),
                                   (LINEAR_OPTICAL, nrail_outputs_lo)):
                scenario = nrail_scenario(family, rails)
                outputs = run_scenario(scenario, 0.6).outputs
                expected = direct(rails, 0.6)
                for name in OUTPUT_NAMES:
                    self.check('%s %s against the direct outputs' %
                               (scenario.name, name),
                               getattr(outputs, name).residual(
                                   getattr(expected, name)),
                               DEFAULT_ATOL)

        self.check('Fourier-transformed cluster',
                   verify_ft_cluster_equivalence(0.5).residual,
                   DEFAULT_ATOL)


def _random_gate_pipeline(rng, n_modes):
    registry = ModeRegistry()
    modes = [ModeState.fresh(registry.add_squeezed(
        float(rng.uniform(0.0, 2.0)))) for _ in range(n_modes)]

    for _ in range(int(rng.integers(1, 9))):
        gate = int(rng.integers(0, 5))
        first, second = (int(i) for i in rng.choice(n_modes, 2,
                                                     replace=False))
        if gate == 0:
            modes[first], modes[second] = apply_qnd(modes[first],
                                                    modes[second])
        elif gate == 1:
            modes[first], modes[second] = apply_beamsplitter_5050(
                modes[first], modes[second])
        elif gate == 2:
            modes[first] = apply_fourier(modes[first])
        elif gate == 3:
            modes[first] = apply_fourier(modes[first], inverse=True)
        else:
            u = unitary_group.rvs(n_modes, random_state=rng)
            modes = apply_network(u, modes)

    return [mode.q for mode in modes] + [mode.p for mode in modes]


class CommutatorSuite(VerificationSuite):
    """
    Random gate pipelines preserve the canonical commutators.
    """
    suite_name = 'commutators'

    configurations = 500

    def run(self):
        rng = numpy.random.default_rng(SEED)
        for index in range(self.configurations):
            n_modes = int(rng.integers(2, 6))
            ops = _random_gate_pipeline(rng, n_modes)
            self.check('gate pipeline %d' % index,
                       numpy.max(numpy.abs(commutator_matrix(ops) -
                                           symplectic_form(n_modes))),
                       DEFAULT_ATOL)

        for family in FAMILIES:
            for rails in (1, 2, 3):
                if family == CANONICAL:
                    outputs = nrail_outputs_canonical(rails, 0.8)
                else:
                    outputs = nrail_outputs_lo(rails, 0.8)
                self.check('%s %dR output commutators' % (family, rails),
                           numpy.max(numpy.abs(output_commutators(outputs) -
                                               canonical_commutators())),
                           DEFAULT_ATOL)


class WeightSuite(VerificationSuite):
    """
    Uniform mid-rail weights minimize the excess noise.
    """
    suite_name = 'weights'
    depends_on = ('correlators',)

    perturbations = 100

    def run(self):
        rng = numpy.random.default_rng(SEED)
        for family in FAMILIES:
            for rails in range(1, MAX_RAILS + 1):
                spec = nrail(rails)
                if family == CANONICAL:
                    state = build_canonical(spec, 0.7)
                else:
                    state = build_lo_cluster(spec, 0.7)
                noise_cov = arm_noise_covariance(state,
                                                 mid_rails(rails)[0])
                uniform = uniform_weights(rails)
                self.check('%s %dR optimal weights' % (family, rails),
                           numpy.max(numpy.abs(optimal_weights(noise_cov) -
                                               uniform)), 1e-9)

                if rails == 1:
                    continue

                best = excess_noise(uniform, noise_cov)
                for _ in range(self.perturbations):
                    delta = rng.normal(scale=0.1, size=rails)
                    delta -= delta.mean()
                    self.expect('%s %dR perturbed weights are worse' %
                                (family, rails),
                                excess_noise(uniform + delta,
                                             noise_cov) > best)


class ClosedFormSuite(VerificationSuite):
    """
    The full pipeline against the closed forms, and the X-form
    symplectic eigenvalues against the generic oracle.
    """
    suite_name = 'closed-form'
    depends_on = ('correlators',)

    def run(self):
        r_values = [0.05 * step for step in range(41)]
        for family in FAMILIES:
            for rails in CLOSED_FORM_RAILS:
                triples = pipeline_sweep(family, rails, r_values)
                for r, corr in zip(r_values, triples):
                    label = '%s N=%d r=%.2f' % (family, rails, r)
                    pair = symplectic_pt(corr)
                    self.check(label,
                               abs(log_negativity(pair.minus) -
                                   en_closed(family, rails, r)),
                               CLOSED_FORM_ATOL)
                    self.check('%s largest eigenvalue' % label,
                               max(0.0, VACUUM_VARIANCE - pair.plus),
                               DEFAULT_ATOL)
                    generic = symplectic_pt_generic(covariance_x(corr))
                    self.check('%s generic oracle' % label,
                               max(abs(generic.minus - pair.minus),
                                   abs(generic.plus - pair.plus)),
                               DEFAULT_ATOL)

        for family, rails in ((CANONICAL, L4), (CANONICAL, L4_OUTER),
                              (LINEAR_OPTICAL, L4)):
            for r in r_values:
                corr = correlators_closed(family, rails, r)
                self.check('%s %s r=%.2f largest eigenvalue' %
                           (family, rails, r),
                           max(0.0, VACUUM_VARIANCE -
                               symplectic_pt(corr).plus), DEFAULT_ATOL)


def lo_threshold_root(rails):
    """
    The squeezing at which the linear-optical N-rail outputs become
    separable, from the quadratic sqrt(ab) = c + 1/4 in x = e^{-2r}.
    """
    # ab = (c + 1/4)^2 with a = (1 + s x)/4, s = (2N + 1)/N,
    # b = (2 + 3x)/4, c = (1 + x)/4 gives
    # (3s - 1) x^2 + (2s - 1) x - 2 = 0.
    slope = 2.0 if rails == math.inf else (2.0 * rails + 1) / rails
    quadratic, linear = 3 * slope - 1, 2 * slope - 1
    x = (-linear + math.sqrt(linear ** 2 + 8 * quadratic)) / (2 * quadratic)
    return -math.log(x) / 2


class ThresholdSuite(VerificationSuite):
    """
    Half-ideal squeezing table and separability thresholds.
    """
    suite_name = 'thresholds'
    depends_on = ('closed-form',)

    def run(self):
        for family, table in RBAR_TABLE.items():
            for rails, expected in table.items():
                self.check('rbar %s N=%s' % (family, rails),
                           abs(rbar(family, rails) - expected),
                           RBAR_TOLERANCE)

        canonical_two = math.log(math.sqrt(math.sqrt(17) + 3) / 2)
        for rails in (2, L4):
            self.check('canonical N=%s threshold' % rails,
                       abs(entanglement_threshold(CANONICAL, rails) -
                           canonical_two), THRESHOLD_ATOL)

        for rails in (1, 2, 3, 100, math.inf):
            self.check('linear-optical N=%s threshold' % rails,
                       abs(entanglement_threshold(LINEAR_OPTICAL, rails) -
                           lo_threshold_root(rails)), THRESHOLD_ATOL)

        self.expect('thresholds lie in the search bracket',
                    R_BRACKET[0] < lo_threshold_root(100) < R_BRACKET[1])


class WitnessSuite(VerificationSuite):
    """
    The witness at its optimal gain detects exactly the entangled
    outputs.
    """
    suite_name = 'witness'
    depends_on = ('closed-form',)

    samples = 1000

    def run(self):
        rng = numpy.random.default_rng(SEED)
        disagreements = 0
        for _ in range(self.samples):
            corr = random_physical_correlators(rng)
            witness = witness_wg(corr, optimal_gain(corr))
            entangled = symplectic_pt(corr).minus < VACUUM_VARIANCE
            disagreements += witness.entangled != entangled
        self.check('witness disagreements over %d triples' % self.samples,
                   disagreements, 0)

        detected = witness_wg(correlators_closed(CANONICAL, 100, 0.45),
                              optimal_gain(correlators_closed(
                                  CANONICAL, 100, 0.45)))
        self.expect('canonical N=100 r=0.45 detected', detected.entangled)

        missed = witness_wg(correlators_closed(CANONICAL, 100, 0.2), 1.0)
        self.expect('canonical N=100 r=0.2 g=1 not detected',
                    not missed.entangled)


def random_physical_correlators(rng):
    """
    A random X-form triple with c >= 0 and ab - c^2 >= 1/16.
    """
    c = float(rng.uniform(0.0, 1.0))
    a = float(rng.uniform(0.05, 2.0))
    b = (c * c + VACUUM_VARIANCE ** 2) / a + float(rng.uniform(0.0, 1.0))
    return Correlators(a, b, c)


def suite_classes():
    """
    Returns:
        OrderedDict: suite name -> class, dependencies first.
    """
    classes = OrderedDict((klass.suite_name, klass)
                          for klass in all_subclasses(VerificationSuite)
                          if klass.suite_name)
    names = list(classes)
    deps_map = {}
    for index, name in enumerate(names):
        deps = set()
        for dep in classes[name].depends_on:
            if dep not in classes:
                error('unknown-suite',
                      'Suite %s depends on unknown suite %s' % (name, dep))
            deps.add(names.index(dep))
        deps_map[index] = deps

    return OrderedDict((names[index], classes[names[index]])
                       for index in toposort_flatten(deps_map))


def _with_dependencies(names, classes):
    wanted = set()
    pending = list(names)
    while pending:
        name = pending.pop()
        if name in wanted:
            continue
        wanted.add(name)
        pending.extend(classes[name].depends_on)
    return wanted


class VerificationRunner(Configurable):
    """
    Runs suites in dependency order.

    Attributes:
        suite_finished: Signal, emitted with every SuiteResult.
    """

    def __init__(self):
        self.suite_finished = Signal()
        self.suites = [ALL]

    def run(self, names=None):
        """
        Args:
            names: iterable of suite names, `ALL` or None for every
                suite.

        Returns:
            list: the SuiteResults, dependencies first.
        """
        classes = suite_classes()
        names = list(names or self.suites)
        if ALL in names:
            names = list(classes)

        unknown = [name for name in names if name not in classes]
        if unknown:
            error('unknown-suite', 'Unknown suites %s' % ', '.join(unknown),
                  known=', '.join(classes))

        wanted = _with_dependencies(names, classes)
        results = OrderedDict()
        for name, klass in classes.items():
            if name not in wanted:
                continue

            failed_deps = [dep for dep in klass.depends_on
                           if not results[dep].passed]
            suite = klass()
            if failed_deps:
                suite.fail('Dependencies failed: %s' %
                           ', '.join(failed_deps))
            else:
                info('Running suite %s' % name, 'verify')
                try:
                    suite.run()
                except CVClusterException as exc:
                    suite.fail(exc.message)

            results[name] = suite.result()
            self.suite_finished(results[name])

        return list(results.values())

    @staticmethod
    def add_arguments(parser):
        group = parser.add_argument_group(
            'Verification', 'verification suite options')
        group.add_argument('--suite', action='append', dest='suite',
                           help='Suite to run, "%s" by default; may be '
                           'repeated' % ALL)

    def parse_config(self, config):
        self.suites = config.get('suite') or [ALL]


def run_suites(names=None):
    """
    Shortcut to `VerificationRunner.run`.
    """
    return VerificationRunner().run(names)
