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
import os
import shutil
import unittest

import yaml

from cvcluster.core.config import Config, load_config_file
from cvcluster.core.exceptions import ConfigError
from cvcluster.utils.loggable import Logger


class TestConfig(unittest.TestCase):
    def setUp(self):
        Logger.reset()
        Logger.silent = True
        here = os.path.dirname(__file__)
        priv_dir = os.path.join(here, 'test-private')
        self.__priv_dir = os.path.abspath(priv_dir)
        shutil.rmtree(self.__priv_dir, ignore_errors=True)
        os.mkdir(self.__priv_dir)

    def tearDown(self):
        shutil.rmtree(self.__priv_dir, ignore_errors=True)

    def __write(self, name, contents):
        path = os.path.join(self.__priv_dir, name)
        with open(path, 'w') as _:
            _.write(contents)
        return path

    def test_priority(self):
        conf_file = self.__write('test.json',
                                 '{"family": "lo", "steps": 11, '
                                 '"r_max": 1.5}')
        cfg = Config(command_line_args={'family': 'canonical'},
                     conf_file=conf_file,
                     defaults={'steps': 41, 'format': 'csv'})

        self.assertEqual(cfg.get('family'), 'canonical')
        self.assertEqual(cfg.get('steps'), 11)
        self.assertEqual(cfg.get('format'), 'csv')
        self.assertEqual(cfg.get('r_max'), 1.5)
        self.assertIsNone(cfg.get('missing'))
        self.assertEqual(cfg.get('missing', 3), 3)

    def test_invoke_dir(self):
        conf_file = self.__write('test.json', '{}')
        cfg = Config(conf_file=conf_file)
        self.assertEqual(cfg.get_invoke_dir(), os.getcwd())

    def test_yaml(self):
        conf_file = self.__write('test.yaml', 'family: lo\nrails: [1, 2]\n')
        cfg = Config(conf_file=conf_file)
        self.assertEqual(cfg.get('family'), 'lo')
        self.assertEqual(cfg.get('rails'), [1, 2])

    def test_paths(self):
        conf_file = self.__write('test.json',
                                 '{"out": "curve.csv", '
                                 '"topology": "/abs/chain.json"}')
        cfg = Config(conf_file=conf_file)

        # Relative paths from the configuration file are rooted at its
        # directory
        self.assertEqual(cfg.get_path('out'),
                         os.path.join(os.path.realpath(self.__priv_dir),
                                      'curve.csv'))
        self.assertEqual(cfg.get_path('topology'),
                         os.path.realpath('/abs/chain.json'))
        self.assertIsNone(cfg.get_path('missing'))

    def test_missing_file(self):
        self.assertEqual(
            load_config_file(os.path.join(self.__priv_dir, 'nope.json')),
            {})

    def test_invalid_file(self):
        conf_file = self.__write('test.json', '{"family": ')
        with self.assertRaises(ConfigError):
            load_config_file(conf_file)

        conf_file = self.__write('list.json', '[1, 2]')
        with self.assertRaises(ConfigError):
            load_config_file(conf_file)

    def test_dump(self):
        conf_file = self.__write('test.json', '{"family": "lo"}')
        cfg = Config(command_line_args={'steps': 5, 'command': 'curve'},
                     conf_file=conf_file)
        dest = os.path.join(self.__priv_dir, 'dumped.json')
        cfg.dump(dest)

        with open(dest) as _:
            dumped = json.load(_)
        self.assertEqual(dumped, {'family': 'lo', 'steps': 5})

    def test_dump_yaml(self):
        cfg = Config(command_line_args={'rails': '1,2'})
        dest = os.path.join(self.__priv_dir, 'dumped.yaml')
        cfg.dump(dest)

        with open(dest) as _:
            self.assertEqual(yaml.safe_load(_), {'rails': '1,2'})


if __name__ == '__main__':
    unittest.main()
