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
Base class for everything that reads options from the command line
or the configuration file.
"""


class Configurable(object):
    """
    Base class for objects that expose command-line arguments and
    read their settings back from a `cvcluster.core.config.Config`.
    """

    @staticmethod
    def add_arguments(parser):
        """Register arguments on an `argparse.ArgumentParser`"""
        pass

    def parse_config(self, config):
        """Pull settings out of a `cvcluster.core.config.Config`"""
        pass
