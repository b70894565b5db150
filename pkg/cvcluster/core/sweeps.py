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
Tabular data producers.

Every command that emits data builds a `Table` here, and `write_table`
renders it as CSV or JSON. Rows are assembled in a fixed order, so the
output of a given configuration is byte-for-byte reproducible.
"""

import csv
import io
import json
import math
import sys
from collections import OrderedDict, namedtuple

import numpy
from schema import And, Or, Schema, SchemaError, Use

from cvcluster.core.canonical import CANONICAL, FAMILIES, check_family
from cvcluster.core.entangle import (IDEAL_EN, correlators_closed,
                                     correlators_from_outputs, en_closed,
                                     log_negativity, optimal_gain,
                                     pipeline_sweep, rbar, symplectic_pt,
                                     witness_wg)
from cvcluster.core.exceptions import ReportedException
from cvcluster.core.lincluster import PIVOTED
from cvcluster.core.teleport import run_scenario
from cvcluster.utils.configurable import Configurable
from cvcluster.utils.loggable import Logger, error, info
from cvcluster.utils.signals import Signal
from cvcluster.utils.utils import format_float, parse_rails


CSV = 'csv'
JSON = 'json'
FORMATS = (CSV, JSON)

CLOSED = 'closed'
PIPELINE = 'pipeline'
METHODS = (CLOSED, PIPELINE)

OPTIMAL = 'optimal'

TABLE_RAILS = (1, 2, 3, 100)


class SweepError(ReportedException):
    """
    Raised for invalid sweep configurations.
    """
    pass


Logger.register_error_code('invalid-sweep', SweepError, domain='sweeps')


def _is_rail_count(value):
    if value == math.inf:
        return True
    return isinstance(value, int) and not isinstance(value, bool) and \
        value >= 1


def _finite(value):
    return math.isfinite(value)


SWEEP_SCHEMA = Schema({
    'family': Or(*FAMILIES),
    'rails': And([_is_rail_count], len),
    'r_min': And(Use(float), _finite, lambda r: r >= 0),
    'r_max': And(Use(float), _finite),
    'steps': And(int, lambda n: not isinstance(n, bool) and n >= 2),
    'format': Or(*FORMATS),
    'out': Or(None, str),
})


class SweepConfig(object):
    """
    A validated sweep configuration.

    Attributes:
        family: str, the cluster family.
        rails: list, rail counts, `math.inf` included.
        r_min: float, >= 0.
        r_max: float, >= r_min.
        steps: int, >= 2, the number of squeezing values.
        format: str, `CSV` or `JSON`.
        out: str, the output path, None for stdout.
    """

    # pylint: disable=too-many-arguments
    def __init__(self, family=CANONICAL, rails=(1,), r_min=0.0, r_max=2.0,
                 steps=41, fmt=CSV, out=None):
        document = {'family': family, 'rails': list(rails), 'r_min': r_min,
                    'r_max': r_max, 'steps': steps, 'format': fmt,
                    'out': out}
        try:
            document = SWEEP_SCHEMA.validate(document)
        except SchemaError as err:
            error('invalid-sweep', 'Invalid sweep configuration: %s' %
                  ' '.join(str(err).split()))

        if document['r_max'] < document['r_min']:
            error('invalid-sweep', 'r_max must not be below r_min',
                  r_min=document['r_min'], r_max=document['r_max'])

        self.family = document['family']
        self.rails = document['rails']
        self.r_min = document['r_min']
        self.r_max = document['r_max']
        self.steps = document['steps']
        self.format = document['format']
        self.out = document['out']

    def r_values(self):
        """
        Returns:
            list: `steps` evenly spaced squeezing values.
        """
        return [float(r) for r in numpy.linspace(self.r_min, self.r_max,
                                                 self.steps)]

    def single_rails(self):
        """
        The only rail count, for commands that need exactly one.
        """
        if len(self.rails) != 1:
            error('invalid-sweep',
                  'Expected a single rail count, got %s' %
                  ','.join(format_float(n) for n in self.rails))
        return self.rails[0]


Table = namedtuple('Table', ['columns', 'rows'])


class Sweeper(Configurable):
    """
    Produces the tables behind the data commands.

    Attributes:
        point_computed: Signal, emitted with (table name, index, total)
            after every row.
    """

    def __init__(self, frame=PIVOTED):
        self.frame = frame
        self.point_computed = Signal()

    def __progress(self, name, index, total):
        self.point_computed(name, index, total)

    def curve_table(self, config, method=CLOSED):
        """
        Log-negativity against squeezing, absolute and normalized to the
        ideal CZ value.

        Args:
            config: SweepConfig, with a single rail count.
            method: str, `CLOSED` for the closed forms, `PIPELINE` to
                build the cluster (finite rail counts only).
        """
        rails = config.single_rails()
        r_values = config.r_values()

        if method == PIPELINE:
            check_family(config.family)
            en_values = [log_negativity(symplectic_pt(corr).minus)
                         for corr in pipeline_sweep(config.family, rails,
                                                    r_values, self.frame)]
        elif method == CLOSED:
            en_values = [en_closed(config.family, rails, r)
                         for r in r_values]
        else:
            error('invalid-sweep', 'Unknown method %r' % (method,))

        rows = []
        for index, (r, value) in enumerate(zip(r_values, en_values)):
            rows.append([r, value, value / IDEAL_EN])
            self.__progress('curve', index, len(r_values))

        return Table(['r', 'EN', 'EN_normalized'], rows)

    def rbar_table(self, rails=TABLE_RAILS, families=FAMILIES):
        """
        The squeezing reaching half of the ideal log-negativity, per
        family and rail count, with the N -> infinity row last.

        The `rbar` column is the value printed to two decimals, `rbar_full`
        the value itself.
        """
        rails = [n for n in rails if n != math.inf]
        rows = []
        total = len(families) * (len(rails) + 1)
        for family in families:
            for count in rails + [math.inf]:
                value = rbar(family, count)
                rows.append([family, count, '%.2f' % value, value])
                self.__progress('rbar', len(rows) - 1, total)

        return Table(['family', 'N', 'rbar', 'rbar_full'], rows)

    # pylint: disable=too-many-arguments
    def witness_table(self, family, rails, r, gains):
        """
        The variance-sum witness over a list of gains.

        Args:
            gains: iterable of floats, where `OPTIMAL` stands for the
                gain minimizing W_g - g.
        """
        corr = correlators_closed(family, rails, r)
        gains = list(gains)
        rows = []
        for index, gain in enumerate(gains):
            witness = _witness_at(corr, gain)
            rows.append([witness.g, witness.value, witness.bound,
                         witness.entangled])
            self.__progress('witness', index, len(gains))

        return Table(['g', 'W_g', 'bound', 'entangled'], rows)

    def witness_curve(self, config, gain=OPTIMAL):
        """
        The variance-sum witness against squeezing at a fixed gain.

        Args:
            config: SweepConfig, with a single rail count.
            gain: float, or `OPTIMAL` to use the optimal gain of every
                squeezing value.
        """
        rails = config.single_rails()
        r_values = config.r_values()
        rows = []
        for index, r in enumerate(r_values):
            witness = _witness_at(
                correlators_closed(config.family, rails, r), gain)
            rows.append([r, witness.g, witness.value, witness.bound,
                         witness.entangled])
            self.__progress('witness', index, len(r_values))

        return Table(['r', 'g', 'W_g', 'bound', 'entangled'], rows)

    @staticmethod
    def matrix_table(matrix):
        """
        A matrix, row-major, one column per matrix column.
        """
        matrix = numpy.atleast_2d(numpy.asarray(matrix))
        columns = ['c%d' % (col + 1) for col in range(matrix.shape[1])]
        rows = [[_scalar(value) for value in row] for row in matrix]
        return Table(columns, rows)

    def scenario_table(self, scenarios, r):
        """
        Identity residual and output log-negativity of every scenario.
        """
        scenarios = list(scenarios)
        rows = []
        for index, scenario in enumerate(scenarios):
            result = run_scenario(scenario, r, frame=self.frame)
            corr = correlators_from_outputs(result.outputs)
            rows.append([scenario.name, scenario.family, r, result.residual,
                         log_negativity(symplectic_pt(corr).minus)])
            self.__progress('scenarios', index, len(scenarios))

        return Table(['name', 'family', 'r', 'residual', 'EN'], rows)

    @staticmethod
    def add_arguments(parser):
        group = parser.add_argument_group(
            'Sweeps', 'data generation options')
        group.add_argument('--family', choices=FAMILIES, dest='family',
                           help='Cluster family')
        group.add_argument('--rails', dest='rails',
                           help='Comma-separated rail counts, inf allowed')
        group.add_argument('--r-min', type=float, dest='r_min',
                           help='Smallest squeezing parameter')
        group.add_argument('--r-max', type=float, dest='r_max',
                           help='Largest squeezing parameter')
        group.add_argument('--steps', type=int, dest='steps',
                           help='Number of squeezing values')
        group.add_argument('--r', type=float, dest='r',
                           help='Squeezing parameter of single-point '
                           'commands')
        group.add_argument('--gain', dest='gain',
                           help='Witness gain, a number or "optimal"')
        group.add_argument('--gain-min', type=float, dest='gain_min',
                           help='Smallest gain of a witness sweep')
        group.add_argument('--gain-max', type=float, dest='gain_max',
                           help='Largest gain of a witness sweep')
        group.add_argument('--gain-steps', type=int, dest='gain_steps',
                           help='Number of gains of a witness sweep')
        group.add_argument('--method', choices=METHODS, dest='method',
                           help='Closed forms or full cluster pipeline')
        group.add_argument('--format', choices=FORMATS, dest='format',
                           help='Output format')
        group.add_argument('--out', dest='out',
                           help='Output file, stdout by default')

    def parse_config(self, config):
        self.frame = config.get('frame') or self.frame


def sweep_config_from(config):
    """
    Build a `SweepConfig` from a `cvcluster.core.config.Config`.
    """
    rails = config.get('rails')
    out = config.get_path('out') if config.get('out') \
        else None
    return SweepConfig(family=config.get('family') or CANONICAL,
                       rails=parse_rails(rails if rails is not None else 1),
                       r_min=_or(config.get('r_min'), 0.0),
                       r_max=_or(config.get('r_max'), 2.0),
                       steps=_or(config.get('steps'), 41),
                       fmt=config.get('format') or CSV,
                       out=out)


def _or(value, default):
    return default if value is None else value


def gain_values(config):
    """
    The gains a witness command evaluates, from --gain or the
    --gain-min/--gain-max/--gain-steps sweep. The optimal gain is used
    when neither is given.
    """
    gain = config.get('gain')
    if config.get('gain_steps'):
        if gain is not None:
            error('invalid-sweep', '--gain and a gain sweep are exclusive')
        low = _or(config.get('gain_min'), 0.0)
        high = _or(config.get('gain_max'), 2.0)
        steps = config.get('gain_steps')
        if steps < 2 or high < low:
            error('invalid-sweep', 'Invalid gain sweep',
                  gain_min=low, gain_max=high, gain_steps=steps)
        return [float(g) for g in numpy.linspace(low, high, steps)]

    if gain is None or gain == OPTIMAL:
        return [OPTIMAL]

    try:
        return [float(gain)]
    except (TypeError, ValueError):
        error('invalid-sweep', 'Invalid gain %r' % (gain,))


def _witness_at(corr, gain):
    if gain == OPTIMAL:
        gain = optimal_gain(corr)
    return witness_wg(corr, float(gain))


def _scalar(value):
    if isinstance(value, (numpy.complexfloating, complex)):
        if value.imag == 0:
            return float(value.real)
        return complex(value)
    if isinstance(value, numpy.bool_):
        return bool(value)
    if isinstance(value, numpy.integer):
        return int(value)
    if isinstance(value, numpy.floating):
        return float(value)
    return value


def _csv_cell(value):
    value = _scalar(value)
    if isinstance(value, complex):
        sign = '-' if value.imag < 0 else '+'
        return '%s%s%sj' % (format_float(value.real), sign,
                            format_float(abs(value.imag)))
    if isinstance(value, (bool, int, float)):
        return format_float(value)
    return str(value)


def _json_cell(value):
    value = _scalar(value)
    if isinstance(value, complex):
        return [_json_cell(value.real), _json_cell(value.imag)]
    if isinstance(value, float) and math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return value


def render_table(table, fmt=CSV):
    """
    Returns:
        str: `table` as CSV (header row, LF line endings, 17 significant
            digits) or as a JSON object with "columns" and "rows".
    """
    if fmt == CSV:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_csv_cell(value) for value in row])
        return out.getvalue()

    if fmt == JSON:
        document = OrderedDict([
            ('columns', list(table.columns)),
            ('rows', [[_json_cell(value) for value in row]
                      for row in table.rows])])
        return json.dumps(document, indent=2) + '\n'

    error('invalid-sweep', 'Unknown format %r' % (fmt,))


def write_text(text, out=None):
    """
    Write `text` to `out`, or to stdout.
    """
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    with open(out, 'w', newline='') as _:
        _.write(text)
    info('Wrote %s' % out, 'sweeps')


def write_table(table, fmt=CSV, out=None):
    """
    Render `table` and write it to `out`, or to stdout.

    Returns:
        str: the rendered text.
    """
    text = render_table(table, fmt)
    write_text(text, out)
    return text
