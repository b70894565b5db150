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

"""Base cvcluster exceptions"""


class CVClusterException(Exception):
    """Base cvcluster exception"""

    def __init__(self, message):
        self.message = message
        super(CVClusterException, self).__init__(message)


class ConfigError(CVClusterException):
    """Raised for unusable configuration files or options"""
    pass


class ReportedException(CVClusterException):
    """
    An exception that carries structured context along with its message,
    for example the offending matrix entry or the worst residual.

    Attributes:
        context: dict, free-form key/value pairs describing the failure.
    """

    def __init__(self, message=None, **context):
        self.context = context
        if context:
            details = ', '.join('%s=%s' % (key, context[key])
                                for key in sorted(context))
            message = '%s (%s)' % (message, details)
        super(ReportedException, self).__init__(message)
