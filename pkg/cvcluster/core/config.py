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
Implement a high-level config parser for cvcluster.
"""
import os
import json

import yaml

from cvcluster.utils.loggable import error


YAML_EXTENSIONS = ('.yaml', '.yml')


def _is_yaml(path):
    return os.path.splitext(path)[1].lower() in YAML_EXTENSIONS


def load_config_file(conf_file):
    """
    Load a JSON or YAML configuration file.

    A missing file is treated as an empty configuration, the
    implicit `cvcluster.json` lookup relies on that.

    Returns:
        dict: the parsed configuration.
    """
    try:
        with open(conf_file) as _:
            try:
                if _is_yaml(conf_file):
                    conf = yaml.safe_load(_) or {}
                else:
                    conf = json.load(_)
            except (ValueError, yaml.YAMLError) as ze_error:
                error('invalid-config',
                      'The provided configuration file %s is not valid.\n'
                      'The exact error was %s.\n' %
                      (conf_file, str(ze_error)))

    except FileNotFoundError:
        conf = {}
    except IOError as _err:
        error('setup-issue',
              'Passed config file %s could not be opened (%s)' %
              (conf_file, _err))

    if not isinstance(conf, dict):
        error('invalid-config',
              'The configuration file %s must hold a mapping, not %s' %
              (conf_file, type(conf).__name__))

    return conf


class Config:
    """
    Merged view over the command line, a configuration file and the
    argparse defaults, in that order of priority.
    """

    def __init__(self, command_line_args=None, conf_file=None, defaults=None,
                 conf=None):
        """
        Constructor for `Config`.

        Args:
            command_line_args: dict, options explicitly passed on the
                command line, they override the keys defined in `conf_file`
            conf_file: str, the path to the configuration file, or `None`.
            defaults: dict, fallback values.
            conf: dict, an already loaded configuration for `conf_file`.
        """

        self.conf_file = None
        self.__conf_dir = None
        self.__config = {}

        if conf_file:
            self.conf_file = os.path.abspath(conf_file)
            self.__conf_dir = os.path.dirname(self.conf_file)

            if not conf:
                self.__config = load_config_file(self.conf_file)
            else:
                self.__config = conf

        self.__invoke_dir = os.getcwd()
        self.__cli = command_line_args or {}
        self.__defaults = defaults or {}

    def __abspath(self, path, from_conf):
        if path is None:
            return None

        if os.path.isabs(path):
            return os.path.realpath(path)
        if path.startswith('~'):
            return os.path.realpath(os.path.expanduser(path))
        if from_conf and self.__conf_dir:
            return os.path.realpath(os.path.join(self.__conf_dir, path))

        return os.path.realpath(os.path.join(self.__invoke_dir, path))

    def get_invoke_dir(self):
        """
        The directory cvcluster was invoked from, base of command line paths
        """
        return self.__invoke_dir

    def get(self, key, default=None):
        """
        Get the value for `key`.

        Gives priority to command-line overrides.

        Args:
            key: str, the key to get the value for.

        Returns:
            object: The value for `key`
        """
        if key in self.__cli:
            return self.__cli[key]
        if key in self.__config:
            return self.__config.get(key)
        if key in self.__defaults:
            return self.__defaults.get(key)
        return default

    def get_path(self, key, rel_to_cwd=False, rel_to_conf=False):
        """
        Retrieve a path from the config, resolving it against
        the invocation directory or the configuration file directory,
        depending on whether it was passed through the command-line
        or the configuration file.

        Args:
            key: str, the key to lookup the path with

        Returns:
            str: The path, or `None`
        """
        if key in self.__cli:
            path = self.__cli[key]
            from_conf = False
        else:
            path = self.__config.get(key)
            from_conf = True

        if not isinstance(path, str):
            return None

        res = self.__abspath(path, from_conf)

        if rel_to_cwd:
            return os.path.relpath(res, self.__invoke_dir)
        if rel_to_conf:
            return os.path.relpath(res, self.__conf_dir or self.__invoke_dir)

        return res

    def dump(self, conf_file=None):
        """
        Dump the possibly updated config to a file.

        Paths passed on the command line are rewritten relative to the
        destination directory.

        Args:
            conf_file: str, the destination, or None to overwrite the
                existing configuration.
        """

        if conf_file:
            conf_dir = os.path.dirname(conf_file)
            if not conf_dir:
                conf_dir = self.__invoke_dir
            elif not os.path.exists(conf_dir):
                os.makedirs(conf_dir)
        else:
            conf_dir = self.__conf_dir or self.__invoke_dir

        final_conf = {}
        for key, value in list(self.__config.items()):
            if key in self.__cli:
                continue
            final_conf[key] = value

        for key, value in list(self.__cli.items()):
            if key in ('out', 'topology') and isinstance(value, str) and \
                    os.path.splitext(value)[1]:
                path = self.__abspath(value, from_conf=False)
                final_conf[key] = os.path.relpath(path, conf_dir)
            elif key not in ['command', 'output_conf_file', 'conf_file']:
                final_conf[key] = value

        dest = conf_file or self.conf_file or 'cvcluster.json'
        with open(dest, 'w') as _:
            if _is_yaml(dest):
                _.write(yaml.safe_dump(final_conf, default_flow_style=False))
            else:
                _.write(json.dumps(final_conf, sort_keys=True, indent=4))
