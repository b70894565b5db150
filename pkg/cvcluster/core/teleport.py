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
CZ gate teleportation scenarios.

A scenario is declarative: for each of the four output quadratures
q_mu, p_mu, q_nu and p_nu it gives

* a definition, the combination of homodyned quadratures and output
  node quadratures that the protocol actually has access to,
* a noise form, the nullifier combination that the definition differs
  from the ideal CZ image by.

Running a scenario builds the cluster, applies the input preparation and
the input couplings, evaluates both sides and checks they agree
exactly, so that the definitions can be trusted as measurement
sequences.

Quadrature labels follow the usual priming convention: `p_alpha''` is
the momentum of input alpha after the second gate acting on it.
"""

import math
import re
from collections import OrderedDict, namedtuple

from cvcluster.core.exceptions import ReportedException
from cvcluster.core.canonical import (CANONICAL, LINEAR_OPTICAL, OUTPUT_NAMES,
                                      TeleportOutputs, build_canonical,
                                      check_family, ideal_cz_image,
                                      nullifier, register_inputs)
from cvcluster.core.entangle import (L4, L4_OUTER, correlators_closed,
                                     correlators_from_outputs, log_negativity,
                                     symplectic_pt)
from cvcluster.core.gates import (apply_beamsplitter_5050, apply_fourier,
                                  apply_qnd)
from cvcluster.core.lincluster import PIVOTED, build_lo_cluster
from cvcluster.core.qalg import (COHERENT, DEFAULT_ATOL, commutator_matrix,
                                 linear_combination)
from cvcluster.core.topology import (INNER, OUTER, linear_chain, mid_rails,
                                     nrail)
from cvcluster.utils.loggable import Logger, error, debug


QND = 'qnd'
BEAMSPLITTER = 'beamsplitter'
COUPLINGS = (QND, BEAMSPLITTER)

FOURIER = 'fourier'
INVERSE_FOURIER = 'inverse-fourier'

STANDARD = 'standard'
FT = 'ft'

SQRT2 = math.sqrt(2)


class ScenarioError(ReportedException):
    """
    Raised when a scenario is malformed or its identities do not hold.
    """
    pass


Logger.register_error_code('scenario-error', ScenarioError,
                           domain='teleport')
Logger.register_error_code('unknown-scenario', ScenarioError,
                           domain='teleport')


class Term(namedtuple('Term', ['coef', 'quad', 'mode', 'primes'])):
    """
    One weighted quadrature in a scenario definition.

    Attributes:
        coef: float, the weight.
        quad: str, 'q' or 'p'.
        mode: int for cluster nodes, str for inputs and beam splitter
            ports.
        primes: int, the number of gates the mode went through.
    """
    __slots__ = ()

    @property
    def label(self):
        """str, for example p_alpha''"""
        return '%s_%s%s' % (self.quad, self.mode, "'" * self.primes)


TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?P<coef>sqrt2|\d+(?:\.\d+)?(?:/\d+)?)?\s*\*?\s*"
    r"(?P<quad>[qp])_(?P<mode>\d+|[a-z]+[12]?)(?P<primes>'*)\s*")


def _parse_coef(text):
    if text is None:
        return 1.0
    if text == 'sqrt2':
        return SQRT2
    if '/' in text:
        num, den = text.split('/')
        return float(num) / float(den)
    return float(text)


def parse_terms(text):
    """
    Parse a definition such as "-q_2 + sqrt2 p_alpha1 + 1/2 p_3'".

    Returns:
        list: the `Term`s.
    """
    terms = []
    pos = 0
    while pos < len(text):
        match = TERM_RE.match(text, pos)
        if not match or match.end() == pos or \
                (terms and not match.group('sign')):
            error('scenario-error',
                  'Cannot parse definition %r at column %d' % (text, pos))

        coef = _parse_coef(match.group('coef'))
        if match.group('sign') == '-':
            coef = -coef

        mode = match.group('mode')
        if mode.isdigit():
            mode = int(mode)

        terms.append(Term(coef, match.group('quad'), mode,
                          len(match.group('primes'))))
        pos = match.end()

    if not terms:
        error('scenario-error', 'Empty definition')

    return terms


def format_terms(terms):
    """
    The inverse of `parse_terms`, up to coefficient rounding.
    """
    res = []
    for term in terms:
        magnitude = abs(term.coef)
        if math.isclose(magnitude, 1.0):
            coef = ''
        elif math.isclose(magnitude, SQRT2):
            coef = 'sqrt2 '
        else:
            coef = '%.12g ' % magnitude
        sign = '-' if term.coef < 0 else '+'
        if not res:
            sign = '-' if term.coef < 0 else ''
            res.append('%s%s%s' % (sign, coef, term.label))
        else:
            res.append('%s %s%s' % (sign, coef, term.label))
    return ' '.join(res)


class Scenario(object):
    """
    A teleportation scenario.

    Attributes:
        name: str, the catalog name.
        family: str, the cluster family.
        spec: topology.ClusterSpec, the cluster topology, including
            where the inputs attach and which nodes are the outputs.
        definitions: OrderedDict, output name -> list of `Term`.
        noise: OrderedDict, output name -> OrderedDict node -> weight
            of its nullifier.
        corrections: str, the Weyl-Heisenberg and Fourier corrections to
            apply on the outputs, for display.
        coupling: str, `QND` or `BEAMSPLITTER`.
        input_prep: str, `INVERSE_FOURIER` or None.
        cluster_prep: str, `FOURIER` or None, applied to every node before
            the inputs are coupled.
        nullifier_form: str, `STANDARD` for p_k - sum q_l, `FT` for
            q_k' + sum p_l' of Fourier-transformed nodes.
        measured_ops: tuple, the labels of the homodyned quadratures.
    """

    # pylint: disable=too-many-instance-attributes
    # pylint: disable=too-many-arguments
    def __init__(self, name, family, spec, definitions, noise, corrections,
                 coupling=QND, input_prep=None, cluster_prep=None,
                 nullifier_form=STANDARD):
        self.name = name
        self.family = check_family(family)
        self.spec = spec

        if coupling not in COUPLINGS:
            error('scenario-error', 'Unknown coupling %r' % (coupling,))
        if input_prep not in (None, INVERSE_FOURIER):
            error('scenario-error',
                  'Unknown input preparation %r' % (input_prep,))
        if cluster_prep not in (None, FOURIER):
            error('scenario-error',
                  'Unknown cluster preparation %r' % (cluster_prep,))
        if nullifier_form not in (STANDARD, FT):
            error('scenario-error',
                  'Unknown nullifier form %r' % (nullifier_form,))
        if nullifier_form == FT and cluster_prep != FOURIER:
            error('scenario-error',
                  'Fourier nullifiers need Fourier-transformed nodes')
        if set(spec.inputs) != {'alpha', 'beta'} or len(spec.outputs) != 2:
            error('scenario-error',
                  '%s needs inputs alpha and beta and two outputs' %
                  spec.name)

        self.coupling = coupling
        self.input_prep = input_prep
        self.cluster_prep = cluster_prep
        self.nullifier_form = nullifier_form
        self.corrections = corrections

        self.definitions = OrderedDict()
        self.noise = OrderedDict()
        for output in OUTPUT_NAMES:
            if output not in definitions or output not in noise:
                error('scenario-error',
                      '%s does not define %s' % (name, output))
            definition = definitions[output]
            if isinstance(definition, str):
                definition = parse_terms(definition)
            self.definitions[output] = list(definition)
            self.noise[output] = OrderedDict(noise[output])

        measured = OrderedDict()
        for terms in self.definitions.values():
            for term in terms:
                if term.mode not in spec.outputs:
                    measured[(term.quad, term.mode, term.primes)] = term
        self.__measured = list(measured.values())
        self.measured_ops = tuple(term.label for term in self.__measured)

    def measured_terms(self):
        """
        Returns:
            list: one unit-weight `Term` per homodyned quadrature.
        """
        return [term._replace(coef=1.0) for term in self.__measured]

    def __repr__(self):
        return '<Scenario %s>' % self.name

    def to_dict(self):
        """
        Returns:
            dict: a JSON-serializable description.
        """
        return OrderedDict([
            ('name', self.name),
            ('family', self.family),
            ('topology', self.spec.to_dict()),
            ('coupling', self.coupling),
            ('input_prep', self.input_prep),
            ('cluster_prep', self.cluster_prep),
            ('nullifier_form', self.nullifier_form),
            ('definitions', OrderedDict(
                (output, format_terms(terms))
                for output, terms in self.definitions.items())),
            ('noise', OrderedDict(
                (output, OrderedDict((str(node), weight)
                                     for node, weight in weights.items()))
                for output, weights in self.noise.items())),
            ('measured', list(self.measured_ops)),
            ('corrections', self.corrections)])


ScenarioResult = namedtuple('ScenarioResult',
                            ['scenario', 'outputs', 'residual', 'noise'])


class _Stages(object):
    """
    The successive states of every mode during a scenario run.
    """

    def __init__(self, scenario):
        self.scenario = scenario
        self.history = OrderedDict()
        self.consumed = set()

    def push(self, mode, state):
        self.history.setdefault(mode, []).append(state)

    def current(self, mode):
        return self.history[mode][-1]

    def lookup(self, term):
        name = self.scenario.name
        if term.mode not in self.history:
            error('scenario-error',
                  '%s references unknown mode %s' % (name, term.label))
        if term.mode in self.consumed:
            error('scenario-error',
                  '%s references %s, which was consumed by a beam splitter'
                  % (name, term.label))
        states = self.history[term.mode]
        if term.primes != len(states) - 1:
            error('scenario-error',
                  '%s reads %s but the final stage of the mode has %d '
                  'primes' % (name, term.label, len(states) - 1))
        return states[term.primes].quadrature(term.quad)


def _build_cluster(scenario, r, frame):
    if scenario.family == CANONICAL:
        return build_canonical(scenario.spec, r)
    return build_lo_cluster(scenario.spec, r, frame=frame)


def ft_nullifier(stages, spec, k):
    """
    q_k' + sum_{l in N_k} p_l' over the Fourier-transformed nodes.
    """
    return linear_combination(
        [(1.0, stages.history[k][1].q)] +
        [(1.0, stages.history[l][1].p) for l in sorted(spec.neighbors(k))])


def _check_measurements(scenario, stages):
    by_mode = {}
    for term in scenario.measured_terms():
        by_mode.setdefault(term.mode, set()).add(term.quad)
    for mode, quads in by_mode.items():
        if len(quads) > 1:
            error('scenario-error',
                  '%s homodynes both quadratures of %s' %
                  (scenario.name, mode))

    measured = [stages.lookup(term) for term in scenario.measured_terms()]
    if not measured:
        return
    worst = abs(commutator_matrix(measured)).max()
    if worst > DEFAULT_ATOL:
        error('scenario-error',
              '%s homodynes non-commuting quadratures' % scenario.name,
              commutator=worst)


# pylint: disable=too-many-locals
def run_scenario(scenario, r, input_moments=None, frame=PIVOTED):
    """
    Run `scenario` at squeezing `r` and check its identities.

    Args:
        scenario: Scenario, the scenario.
        r: float or per-node values, the cluster squeezing.
        input_moments: dict, optional input label -> (<q^2>, <p^2>),
            coherent inputs by default.
        frame: str, the factorization frame for linear-optical clusters.

    Returns:
        ScenarioResult: the outputs, the worst definition/expansion
            residual and the noise operator of every output.
    """
    spec = scenario.spec
    state = _build_cluster(scenario, r, frame)
    stages = _Stages(scenario)

    for k in spec.nodes:
        stages.push(k, state.node(k))
        if scenario.cluster_prep == FOURIER:
            stages.push(k, apply_fourier(state.node(k)))

    inputs = register_inputs(spec, state.registry, input_moments)
    for label, mode_state in inputs.items():
        stages.push(label, mode_state)
        if scenario.input_prep == INVERSE_FOURIER:
            stages.push(label, apply_fourier(mode_state, inverse=True))

    for label, node in spec.inputs.items():
        if scenario.coupling == QND:
            new_input, new_node = apply_qnd(stages.current(label),
                                            stages.current(node))
            stages.push(label, new_input)
            stages.push(node, new_node)
        else:
            first, second = apply_beamsplitter_5050(stages.current(label),
                                                    stages.current(node))
            stages.push('%s1' % label, first)
            stages.push('%s2' % label, second)
            stages.consumed |= {label, node}

    _check_measurements(scenario, stages)

    if scenario.nullifier_form == FT:
        def delta(k):
            return ft_nullifier(stages, spec, k)
    else:
        def delta(k):
            return nullifier(state, k)

    ideal = ideal_cz_image(inputs)
    input_ids = state.registry.ids(COHERENT)

    outputs = OrderedDict()
    noises = OrderedDict()
    residual = 0.0
    for output in OUTPUT_NAMES:
        defined = linear_combination(
            (term.coef, stages.lookup(term))
            for term in scenario.definitions[output])
        noise = linear_combination(
            (weight, delta(k))
            for k, weight in scenario.noise[output].items())

        if not noise.restricted(input_ids).is_zero(DEFAULT_ATOL):
            error('scenario-error',
                  '%s: noise of %s acts on the inputs' %
                  (scenario.name, output))

        residual = max(residual, defined.residual(ideal[output] + noise))
        outputs[output] = defined
        noises[output] = noise

    if residual > DEFAULT_ATOL:
        error('scenario-error',
              '%s: definitions and expansions disagree' % scenario.name,
              residual=residual)

    debug('%s verified, residual %g' % (scenario.name, residual), 'teleport')

    return ScenarioResult(scenario,
                          TeleportOutputs(*(list(outputs.values()) +
                                            [state.registry])),
                          residual, noises)


def _sub(node):
    text = str(node)
    if len(text) > 1:
        return '{%s}' % text
    return text


def _weighted_outcomes(nodes):
    nodes = list(nodes)
    if len(nodes) == 1:
        return 's_%s' % _sub(nodes[0])
    return '(%s)/%d' % ('+'.join('s_%s' % _sub(k) for k in nodes),
                        len(nodes))


def _weighted_momenta(nodes, sign):
    nodes = list(nodes)
    weight = '1/%d ' % len(nodes) if len(nodes) > 1 else ''
    return ' '.join('%s %sp_%d' % (sign, weight, k) for k in nodes)


def nrail_scenario(family, rails):
    """
    The CZ teleportation through the N-rail cluster of `family`, with
    uniform mid-rail weights.

    Single-rail scenarios are named after the six-node chain they
    coincide with.
    """
    check_family(family)
    spec = nrail(rails)
    left, right = mid_rails(rails)
    last = spec.node_count
    left_in, right_in = rails + 2, rails + 3
    weights_left = OrderedDict((k, 1.0 / rails) for k in left)
    weights_right = OrderedDict((k, 1.0 / rails) for k in right)

    name = '%dR' % rails
    if rails == 1:
        name = 'L6'
        spec = linear_chain(6, INNER)

    if family == CANONICAL:
        definitions = {
            'q_mu': "-q_1 - p_alpha'' %s" % _weighted_momenta(left, '+'),
            'p_mu': "-p_1 - p_beta'' + p_%d'" % left_in,
            'q_nu': "-q_%d - p_beta'' %s" % (last,
                                             _weighted_momenta(right, '+')),
            'p_nu': "-p_%d - p_alpha'' + p_%d'" % (last, right_in),
        }
        noise = {
            'q_mu': weights_left,
            'p_mu': OrderedDict([(1, -1.0), (left_in, 1.0)]),
            'q_nu': weights_right,
            'p_nu': OrderedDict([(last, -1.0), (right_in, 1.0)]),
        }
        corrections = (
            'X_1(%s−s_α) Z_1(s_%s−s_β) F_1² X_%s(%s−s_β) Z_%s(s_%s−s_α) '
            'F_%s²' % (_weighted_outcomes(left), _sub(left_in), _sub(last),
                       _weighted_outcomes(right), _sub(last),
                       _sub(right_in), _sub(last)))
        return Scenario(name, family, spec, definitions, noise, corrections,
                        coupling=QND, input_prep=INVERSE_FOURIER)

    definitions = {
        'q_mu': "q_1 %s + sqrt2 q_alpha1" % _weighted_momenta(left, '-'),
        'p_mu': "p_1 + sqrt2 p_alpha2 + sqrt2 q_beta1",
        'q_nu': "q_%d %s + sqrt2 q_beta1" % (last,
                                             _weighted_momenta(right, '-')),
        'p_nu': "p_%d + sqrt2 q_alpha1 + sqrt2 p_beta2" % last,
    }
    noise = {
        'q_mu': OrderedDict((k, -w) for k, w in weights_left.items()),
        'p_mu': OrderedDict([(1, 1.0), (left_in, -1.0)]),
        'q_nu': OrderedDict((k, -w) for k, w in weights_right.items()),
        'p_nu': OrderedDict([(last, 1.0), (right_in, -1.0)]),
    }
    corrections = (
        'X_1(√2 s_{α1}−%s) Z_1(√2(s_{α2}+s_{β1})) X_%s(√2 s_{β1}−%s) '
        'Z_%s(√2(s_{α1}+s_{β2}))' % (_weighted_outcomes(left), _sub(last),
                                     _weighted_outcomes(right), _sub(last)))
    return Scenario(name + '-lo', family, spec, definitions, noise,
                    corrections, coupling=BEAMSPLITTER)


def _l4_scenarios():
    yield Scenario(
        L4_OUTER, CANONICAL, linear_chain(4, OUTER),
        {'q_mu': "-q_2 + p_1'",
         'p_mu': "-p_2 + p_alpha' + p_4'",
         'q_nu': "-q_3 + p_4'",
         'p_nu': "-p_3 + p_beta' + p_1'"},
        {'q_mu': {1: 1.0},
         'p_mu': OrderedDict([(2, -1.0), (4, 1.0)]),
         'q_nu': {4: 1.0},
         'p_nu': OrderedDict([(3, -1.0), (1, 1.0)])},
        'X_2(s_1) Z_2(s_α+s_4) F_2² X_3(s_4) Z_3(s_β+s_1) F_3²')

    yield Scenario(
        L4, CANONICAL, linear_chain(4, INNER),
        {'q_mu': "p_1 - p_alpha''",
         'p_mu': "-q_1 - p_beta'' + p_2'",
         'q_nu': "p_4 - p_beta''",
         'p_nu': "-q_4 - p_alpha'' + p_3'"},
        {'q_mu': {1: 1.0}, 'p_mu': {2: 1.0},
         'q_nu': {4: 1.0}, 'p_nu': {3: 1.0}},
        'X_1†(s_α) Z_1†(s_β−s_2) F_1† X_4†(s_β) Z_4†(s_α−s_3) F_4†',
        input_prep=INVERSE_FOURIER)

    yield Scenario(
        'L4-lo', LINEAR_OPTICAL, linear_chain(4, INNER),
        {'q_mu': "p_1 + sqrt2 q_alpha2",
         'p_mu': "-q_1 + sqrt2 p_alpha1 + sqrt2 q_beta2",
         'q_nu': "p_4 + sqrt2 q_beta2",
         'p_nu': "-q_4 + sqrt2 p_beta1 + sqrt2 q_alpha2"},
        {'q_mu': {1: 1.0}, 'p_mu': {2: 1.0},
         'q_nu': {4: 1.0}, 'p_nu': {3: 1.0}},
        'X_1(√2 s_{α2}) Z_1(√2(s_{α1}+s_{β2})) F_1† '
        'X_4(√2 s_{β2}) Z_4(√2(s_{β1}+s_{α2})) F_4†',
        coupling=BEAMSPLITTER)

    yield Scenario(
        'L4-ft', CANONICAL, linear_chain(4, INNER),
        {'q_mu': "q_1' + p_2''",
         'p_mu': "p_1' + p_alpha' + p_3''",
         'q_nu': "q_4' + p_3''",
         'p_nu': "p_4' + p_beta' + p_2''"},
        {'q_mu': {1: 1.0}, 'p_mu': {2: 1.0},
         'q_nu': {4: 1.0}, 'p_nu': {3: 1.0}},
        'X_1(s_2) Z_1(s_α+s_3) X_4(s_3) Z_4(s_β+s_2)',
        cluster_prep=FOURIER, nullifier_form=FT)


def builtin_scenarios(rails=()):
    """
    The scenario catalog.

    Args:
        rails: iterable of extra rail counts to add parametric N-rail
            scenarios for, in both families.

    Returns:
        OrderedDict: name -> Scenario.
    """
    res = OrderedDict()
    for scenario in _l4_scenarios():
        res[scenario.name] = scenario

    for family in (CANONICAL, LINEAR_OPTICAL):
        for count in sorted(set((1, 2, 3)) | set(rails)):
            scenario = nrail_scenario(family, count)
            res[scenario.name] = scenario

    return res


SCENARIO_NAME_RE = re.compile(r'^(?P<rails>\d+)R(?P<lo>-lo)?$')


def get_scenario(name):
    """
    Look a scenario up by name, building parametric N-rail ones on
    demand.
    """
    catalog = builtin_scenarios()
    if name in catalog:
        return catalog[name]

    match = SCENARIO_NAME_RE.match(name)
    if match and int(match.group('rails')) >= 1:
        family = LINEAR_OPTICAL if match.group('lo') else CANONICAL
        return nrail_scenario(family, int(match.group('rails')))

    error('unknown-scenario', 'No scenario named %s' % name,
          known=', '.join(catalog))


def scenario_correlators(scenario, r, frame=PIVOTED):
    """
    Returns:
        entangle.Correlators: the output correlators of `scenario`.
    """
    return correlators_from_outputs(run_scenario(scenario, r,
                                                 frame=frame).outputs)


def scenario_log_negativity(scenario, r, frame=PIVOTED):
    """
    The log-negativity of the outputs of `scenario` at squeezing `r`.
    """
    return log_negativity(symplectic_pt(
        scenario_correlators(scenario, r, frame)).minus)


FTEquivalence = namedtuple('FTEquivalence',
                           ['ft', 'reference', 'residual'])


def verify_ft_cluster_equivalence(r):
    """
    Check that teleporting through a cluster whose nodes were all
    Fourier-transformed gives the correlators of the plain four-node
    scenario.

    The Fourier nullifiers q_k' + sum p_l' reduce to -pbar_k, so the
    noise only changes sign.

    Returns:
        FTEquivalence: both correlator triples and the worst residual,
            including the one of the nullifier reduction.
    """
    catalog = builtin_scenarios()
    ft_scenario = catalog['L4-ft']

    spec = ft_scenario.spec
    state = build_canonical(spec, r)
    stages = _Stages(ft_scenario)
    for k in spec.nodes:
        stages.push(k, state.node(k))
        stages.push(k, apply_fourier(state.node(k)))

    residual = 0.0
    for k in spec.nodes:
        reduced = ft_nullifier(stages, spec, k)
        residual = max(residual, reduced.residual(-nullifier(state, k)))

    ft_corr = scenario_correlators(ft_scenario, r)
    reference = correlators_closed(CANONICAL, L4, r)
    plain = scenario_correlators(catalog[L4], r)
    for left, right in zip(ft_corr + plain, reference + reference):
        residual = max(residual, abs(left - right))

    if residual > DEFAULT_ATOL:
        error('scenario-error',
              'Fourier-transformed cluster does not match the plain one',
              residual=residual)

    return FTEquivalence(ft_corr, reference, residual)


def export_catalog(scenarios, r=None, frame=PIVOTED):
    """
    A JSON-serializable catalog.

    Args:
        scenarios: iterable of Scenario.
        r: float, when given every entry also carries its identity
            residual and output log-negativity at that squeezing.

    Returns:
        list: one dict per scenario.
    """
    res = []
    for scenario in scenarios:
        entry = scenario.to_dict()
        if r is not None:
            result = run_scenario(scenario, r, frame=frame)
            corr = correlators_from_outputs(result.outputs)
            entry['r'] = r
            entry['residual'] = result.residual
            entry['correlators'] = OrderedDict(corr._asdict())
            entry['log_negativity'] = log_negativity(
                symplectic_pt(corr).minus)
        res.append(entry)
    return res
