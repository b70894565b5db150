#!/usr/bin/python
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

"""The main cvcluster application
"""

import argparse
import cProfile
import json
import os
import sys
import traceback

from cvcluster.core.config import Config, load_config_file
from cvcluster.core.exceptions import CVClusterException
from cvcluster.core.lincluster import (AUTO, FRAMES, METHODS, PIVOTED,
                                       solve_geometric_constraints,
                                       synthesize_network)
from cvcluster.core.sweeps import (CLOSED, CSV, JSON, TABLE_RAILS, Sweeper,
                                   Table, gain_values, sweep_config_from,
                                   write_table, write_text)
from cvcluster.core.canonical import FAMILIES
from cvcluster.core.teleport import (builtin_scenarios, export_catalog,
                                     get_scenario)
from cvcluster.core.topology import topology_from_name
from cvcluster.core.verify import VerificationRunner
from cvcluster.utils.configurable import Configurable
from cvcluster.utils.loggable import Logger, debug, error, info, warn
from cvcluster.utils.setup_utils import VERSION
from cvcluster.utils.utils import all_subclasses, parse_rails


COMMANDS = ('curve', 'table-rbar', 'witness', 'verify', 'gmatrix',
            'umatrix', 'scenarios', 'conf', 'help')

DEFAULT_CONF_FILE = 'cvcluster.json'

DEFAULT_TOPOLOGY = 'L4'

DEFAULT_WITNESS_R = 0.45

DEFAULT_SCENARIO_R = 0.5


class Application(Configurable):
    """
    Dispatches the data and verification commands.
    """

    def __init__(self):
        self.config = None
        self.frame = PIVOTED
        self.solver = AUTO
        self.sweeper = Sweeper()
        self.runner = VerificationRunner()
        self.sweeper.point_computed.connect(self.__point_computed_cb)
        self.runner.suite_finished.connect(self.__suite_finished_cb)

    @staticmethod
    def add_arguments(parser):
        group = parser.add_argument_group(
            'Application', 'cluster options')
        group.add_argument('--topology', dest='topology',
                           help='L<M>, L<M>-outer, <N>R or the path to a '
                           'JSON or YAML topology document')
        group.add_argument('--frame', choices=FRAMES, dest='frame',
                           help='Factorization frame of the synthesized '
                           'networks')
        group.add_argument('--solver', choices=METHODS, dest='solver',
                           help='Geometric constraint solver')
        group.add_argument('--scenario', action='append', dest='scenario',
                           help='Scenario to export, all of them by '
                           'default; may be repeated')

    def parse_config(self, config):
        self.config = config
        self.frame = config.get('frame') or PIVOTED
        self.solver = config.get('solver') or AUTO
        self.sweeper.parse_config(config)
        self.runner.parse_config(config)

    # pylint: disable=no-self-use
    def __point_computed_cb(self, name, index, total):
        debug('%s: point %d of %d' % (name, index + 1, total), 'sweeps')

    def __suite_finished_cb(self, result):
        status = 'PASS' if result.passed else 'FAIL'
        info('%s %s (worst residual %.3g)' %
             (status, result.name, result.worst_residual), 'verify')
        for detail in result.details:
            warn('verification-failure', '%s: %s' % (result.name, detail))

    def __format(self):
        return self.config.get('format') or CSV

    def __out(self):
        if self.config.get('out'):
            return self.config.get_path('out')
        return None

    def __number(self, key, default):
        value = self.config.get(key)
        return default if value is None else float(value)

    def __write(self, table):
        write_table(table, self.__format(), self.__out())

    def cmd_curve(self):
        """Log-negativity against squeezing"""
        sweep = sweep_config_from(self.config)
        table = self.sweeper.curve_table(
            sweep, method=self.config.get('method') or CLOSED)
        write_table(table, sweep.format, sweep.out)
        return 0

    def cmd_table_rbar(self):
        """Half-ideal squeezing table"""
        rails = parse_rails(self.config.get('rails')) or list(TABLE_RAILS)
        family = self.config.get('family')
        families = (family,) if family else FAMILIES
        self.__write(self.sweeper.rbar_table(rails, families))
        return 0

    def cmd_witness(self):
        """Variance-sum witness over gains, or over squeezing"""
        sweep = sweep_config_from(self.config)
        gains = gain_values(self.config)
        if any(self.config.get(key) is not None
               for key in ('r_min', 'r_max', 'steps')):
            if self.config.get('r') is not None or len(gains) != 1:
                error('invalid-sweep',
                      'A squeezing sweep takes a single gain and no --r')
            table = self.sweeper.witness_curve(sweep, gains[0])
        else:
            table = self.sweeper.witness_table(
                sweep.family, sweep.single_rails(),
                self.__number('r', DEFAULT_WITNESS_R), gains)
        write_table(table, sweep.format, sweep.out)
        return 0

    def cmd_verify(self):
        """Run the verification suites"""
        results = self.runner.run()
        rows = [[result.name, result.passed, result.worst_residual,
                 '; '.join(result.details)] for result in results]
        self.__write(Table(['suite', 'passed', 'worst_residual', 'details'],
                           rows))
        return 0 if all(result.passed for result in results) else 1

    def __topology(self):
        return topology_from_name(self.config.get('topology') or
                                  DEFAULT_TOPOLOGY)

    def cmd_gmatrix(self):
        """Dump the solution of the geometric constraints"""
        g = solve_geometric_constraints(self.__topology(), self.solver)
        self.__write(self.sweeper.matrix_table(g))
        return 0

    def cmd_umatrix(self):
        """Dump the synthesized network"""
        u = synthesize_network(self.__topology(), self.frame).u
        self.__write(self.sweeper.matrix_table(u))
        return 0

    def cmd_scenarios(self):
        """Export the scenario catalog with its residuals"""
        names = self.config.get('scenario')
        if names:
            scenarios = [get_scenario(name) for name in names]
        else:
            scenarios = list(builtin_scenarios().values())

        r = self.__number('r', DEFAULT_SCENARIO_R)
        if self.__format() == JSON:
            catalog = export_catalog(scenarios, r, self.frame)
            write_text(json.dumps(catalog, indent=2) + '\n', self.__out())
        else:
            self.__write(self.sweeper.scenario_table(scenarios, r))
        return 0

    def run(self, command):
        """
        Run `command`.

        Returns:
            int: the exit code.
        """
        handler = getattr(self, 'cmd_%s' % command.replace('-', '_'))
        return handler()


class VerificationFailure(CVClusterException):
    """
    Reported for every failed verification check.
    """
    pass


Logger.register_warning_code('verification-failure', VerificationFailure,
                             domain='verify')


# pylint: disable=too-many-branches
def execute_command(parser, config):
    """
    Execute the command stored in `config`.

    Returns:
        int: the exit code.
    """
    res = 0
    cmd = config.get('command')

    if cmd == 'help':
        parser.print_help()
    elif cmd == 'conf':
        config.dump(conf_file=config.get('output_conf_file', None))
    elif cmd in COMMANDS:
        app = Application()
        try:
            app.parse_config(config)
            res = app.run(cmd) or Logger.n_fatal_warnings
        except CVClusterException:
            res = len(Logger.get_issues()) or 1
        except Exception:  # pylint: disable=broad-except
            print("An unknown error happened while running %s and "
                  "cvcluster cannot recover from it. Please report a bug "
                  "with this error message and the steps to reproduce it" %
                  cmd)
            traceback.print_exc()
            res = 1
    elif cmd is None:
        if config.get('version'):
            print(VERSION)
        elif config.get('get_conf_key'):
            key = config.get('get_conf_key')
            value = config.get(key, None)
            if value is not None:
                print(value)
        else:
            parser.print_usage()
    else:
        parser.print_usage()

    return res


def run(args):
    """
    Parse `args` and run the command they name.

    Returns:
        int: the exit code.
    """
    parser = argparse.ArgumentParser(
        formatter_class=argparse.RawDescriptionHelpFormatter,
        add_help=False)
    parser.add_argument('--conf-file', help='Path to the config file',
                        dest='conf_file')
    tmpargs, _args = parser.parse_known_args(args)

    conf = None
    if tmpargs.conf_file:
        try:
            conf = load_config_file(tmpargs.conf_file)
        except CVClusterException:
            return 1

    parser.add_argument('command', action="store", choices=COMMANDS,
                        nargs="?")
    parser.add_argument('--output-conf-file',
                        help='Path where to save the updated conf'
                        ' file',
                        dest='output_conf_file')
    parser.add_argument('--version', help="Print version and exit",
                        action="store_true")
    parser.add_argument("--get-conf-key", action="store",
                        help="print the value for a configuration "
                        "key")

    add_args_methods = set()

    for klass in all_subclasses(Configurable):
        if klass.add_arguments not in add_args_methods:
            klass.add_arguments(parser)
            add_args_methods.add(klass.add_arguments)

    try:
        known_args, _ = parser.parse_known_args(args)
    except SystemExit as exc:
        return exc.code

    defaults = {}
    actual_args = {}
    for key, value in list(dict(vars(known_args)).items()):
        if value != parser.get_default(key):
            actual_args[key] = value
        if parser.get_default(key) is not None:
            defaults[key] = value

    conf_file = actual_args.get('conf_file')
    if conf_file is None and os.path.exists(DEFAULT_CONF_FILE):
        conf_file = DEFAULT_CONF_FILE

    try:
        config = Config(command_line_args=actual_args,
                        conf_file=conf_file,
                        defaults=defaults,
                        conf=conf)
    except CVClusterException:
        return 1

    Logger.parse_config(config)

    return execute_command(parser, config)


def main():
    run_profile = os.environ.get('CVCLUSTER_PROFILING', False)
    res = 0

    if run_profile:
        prof = cProfile.Profile()
        res = prof.runcall(run, sys.argv[1:])
        prof.dump_stats('cvcluster-runstats')
    else:
        res = run(sys.argv[1:])

    return res


if __name__ == '__main__':
    sys.exit(main())
