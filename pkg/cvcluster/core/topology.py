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
Cluster topologies: node counts, edges, and where the two inputs of a
CZ teleportation attach and where its outputs are read.

Nodes are numbered from 1, the numbering of the N-rail family being
fixed: node 1 and node 2N+4 are the outputs, nodes 2..N+1 and
N+4..2N+3 the two sets of mid-rails, nodes N+2 and N+3 the input
attachment points.
"""

import os
import re
import json
from collections import OrderedDict

import numpy
import networkx as nx
import yaml
from schema import Schema, SchemaError, Optional, And

from cvcluster.core.exceptions import ReportedException
from cvcluster.utils.loggable import Logger, error


INPUT_LABELS = ('alpha', 'beta')

INNER = 'inner'
OUTER = 'outer'


class TopologyError(ReportedException):
    """
    Raised for malformed or unknown cluster topologies.
    """
    pass


Logger.register_error_code('invalid-topology', TopologyError,
                           domain='topology')


TOPOLOGY_SCHEMA = {
    'nodes': And(int, lambda n: n >= 1),
    'edges': [And([int], lambda edge: len(edge) == 2)],
    Optional('inputs'): {str: int},
    Optional('outputs'): And([int], lambda nodes: len(nodes) in (0, 2)),
    Optional('name'): And(str, len),
}


class ClusterSpec(object):
    """
    An immutable cluster topology.

    Two specs compare equal when their nodes, edges, attachments and
    outputs agree, whatever their names.

    Attributes:
        node_count: int, the number of nodes M.
        edges: frozenset, (k, l) pairs with k < l.
        inputs: OrderedDict, input label -> attachment node.
        outputs: tuple, the two output nodes, or an empty tuple.
        name: str, a display name.
    """

    def __init__(self, node_count, edges, inputs=None, outputs=(),
                 name=None):
        if not isinstance(node_count, int) or node_count < 1:
            error('invalid-topology',
                  'A cluster needs a positive node count',
                  nodes=node_count)

        normalized = set()
        for edge in edges:
            k, l = edge
            self.__check_node(node_count, k)
            self.__check_node(node_count, l)
            if k == l:
                error('invalid-topology', 'Self-loop on node %d' % k)
            normalized.add((min(k, l), max(k, l)))

        inputs = OrderedDict(inputs or ())
        for label, node in inputs.items():
            self.__check_node(node_count, node)

        outputs = tuple(outputs)
        if len(outputs) not in (0, 2):
            error('invalid-topology',
                  'Expected two output nodes, got %s' % (outputs,))
        for node in outputs:
            self.__check_node(node_count, node)

        self.node_count = node_count
        self.edges = frozenset(normalized)
        self.inputs = inputs
        self.outputs = outputs
        self.name = name or 'cluster-%d' % node_count

        neighbors = {k: set() for k in range(1, node_count + 1)}
        for k, l in self.edges:
            neighbors[k].add(l)
            neighbors[l].add(k)
        self.__neighbors = {k: frozenset(v) for k, v in neighbors.items()}

    @staticmethod
    def __check_node(node_count, node):
        if not isinstance(node, int) or not 1 <= node <= node_count:
            error('invalid-topology',
                  'Node %r is outside 1..%d' % (node, node_count))

    def __key(self):
        return (self.node_count, self.edges, tuple(self.inputs.items()),
                self.outputs)

    def __eq__(self, other):
        if not isinstance(other, ClusterSpec):
            return NotImplemented
        return self.__key() == other.__key()

    def __hash__(self):
        return hash(self.__key())

    def __repr__(self):
        return '<ClusterSpec %s: %d nodes, %d edges>' % (
            self.name, self.node_count, len(self.edges))

    @property
    def nodes(self):
        """range, the node ids 1..M"""
        return range(1, self.node_count + 1)

    def neighbors(self, node):
        """
        Returns:
            frozenset: the neighbor set of `node`.
        """
        self.__check_node(self.node_count, node)
        return self.__neighbors[node]

    def degree(self, node):
        """
        The number of neighbors of `node`.
        """
        return len(self.neighbors(node))

    def adjacency_matrix(self):
        """
        Returns:
            numpy.ndarray: the M x M adjacency matrix, node k at index k - 1.
        """
        res = numpy.zeros((self.node_count, self.node_count))
        for k, l in self.edges:
            res[k - 1, l - 1] = res[l - 1, k - 1] = 1.0
        return res

    def common_neighbor_matrix(self):
        """
        Returns:
            numpy.ndarray: the integer matrix of common neighbor counts,
                with the degree sequence on the diagonal.
        """
        adjacency = self.adjacency_matrix().astype(int)
        return adjacency @ adjacency

    def to_graph(self):
        """
        Returns:
            networkx.Graph: the cluster graph, each node carrying a
                `role` attribute naming its attached input or its
                output position.
        """
        graph = nx.Graph()
        for node in self.nodes:
            graph.add_node(node, role='')
        for label, node in self.inputs.items():
            graph.nodes[node]['role'] = 'input:%s' % label
        for index, node in enumerate(self.outputs):
            role = graph.nodes[node]['role']
            graph.nodes[node]['role'] = role + 'output:%d' % index
        graph.add_edges_from(self.edges)
        return graph

    def isomorphic(self, other):
        """
        Whether `other` is the same cluster up to a relabeling of its
        nodes that preserves input attachments and outputs.
        """
        return nx.is_isomorphic(
            self.to_graph(), other.to_graph(),
            node_match=lambda left, right: left['role'] == right['role'])

    def is_connected(self):
        """
        Whether every node can reach every other one.
        """
        return nx.is_connected(self.to_graph())

    def to_dict(self):
        """
        Returns:
            dict: a JSON-serializable document, see `from_dict`.
        """
        return {'name': self.name,
                'nodes': self.node_count,
                'edges': [list(edge) for edge in sorted(self.edges)],
                'inputs': dict(self.inputs),
                'outputs': list(self.outputs)}

    @staticmethod
    def from_dict(document):
        """
        Build a spec from a {nodes, edges, inputs, outputs} document.
        """
        try:
            document = Schema(TOPOLOGY_SCHEMA).validate(document)
        except SchemaError as err:
            error('invalid-topology', 'Invalid topology document:\n%s' %
                  str(err))

        inputs = OrderedDict()
        for label in sorted(document.get('inputs', {}),
                            key=_input_sort_key):
            inputs[label] = document['inputs'][label]

        return ClusterSpec(document['nodes'],
                           [tuple(edge) for edge in document['edges']],
                           inputs=inputs,
                           outputs=document.get('outputs', ()),
                           name=document.get('name'))


def _input_sort_key(label):
    if label in INPUT_LABELS:
        return (0, INPUT_LABELS.index(label))
    return (1, label)


def linear_chain(node_count, arrangement=INNER):
    """
    The path cluster 1-2-...-M.

    Args:
        node_count: int, M.
        arrangement: str, with `INNER` and an even M >= 4 the inputs
            attach to the two middle nodes and the chain ends are the
            outputs. With `OUTER` (M >= 4) the inputs attach to the
            chain ends and the outputs are nodes 2 and M - 1. Other
            chains carry no attachments.
    """
    if not isinstance(node_count, int) or node_count < 1:
        error('invalid-topology',
              'A chain needs a positive node count', nodes=node_count)

    edges = [(k, k + 1) for k in range(1, node_count)]
    name = 'L%d' % node_count
    inputs = ()
    outputs = ()

    if arrangement == INNER:
        if node_count >= 4 and node_count % 2 == 0:
            half = node_count // 2
            inputs = (('alpha', half), ('beta', half + 1))
            outputs = (1, node_count)
    elif arrangement == OUTER:
        if node_count < 4:
            error('invalid-topology',
                  'The outer arrangement needs at least four nodes',
                  nodes=node_count)
        inputs = (('alpha', 1), ('beta', node_count))
        outputs = (2, node_count - 1)
        name += '-outer'
    else:
        error('invalid-topology', 'Unknown arrangement %r' % arrangement)

    return ClusterSpec(node_count, edges, inputs=inputs, outputs=outputs,
                       name=name)


def mid_rails(rails):
    """
    Returns:
        tuple: the mid-rail nodes of the two arms of `nrail(rails)`, as
            two ranges.
    """
    return range(2, rails + 2), range(rails + 4, 2 * rails + 4)


def nrail(rails):
    """
    The N-rail CZ teleportation cluster.

    Args:
        rails: int, N >= 1.
    """
    if not isinstance(rails, int) or rails < 1:
        error('invalid-topology', 'N-rail clusters need N >= 1',
              rails=rails)

    node_count = 2 * rails + 4
    left, right = mid_rails(rails)
    edges = []
    for node in left:
        edges += [(1, node), (node, rails + 2)]
    edges.append((rails + 2, rails + 3))
    for node in right:
        edges += [(rails + 3, node), (node, node_count)]

    return ClusterSpec(node_count, edges,
                       inputs=(('alpha', rails + 2), ('beta', rails + 3)),
                       outputs=(1, node_count),
                       name='%dR' % rails)


def common_neighbors(spec, k, l):
    """
    Returns:
        int: the degree of `k` if k == l, else the number of nodes
            adjacent to both.
    """
    if k == l:
        return spec.degree(k)
    return len(spec.neighbors(k) & spec.neighbors(l))


def load_topology(path):
    """
    Load a JSON or YAML topology document.
    """
    try:
        with open(path) as _:
            if os.path.splitext(path)[1].lower() in ('.yaml', '.yml'):
                document = yaml.safe_load(_)
            else:
                document = json.load(_)
    except (IOError, ValueError, yaml.YAMLError) as err:
        error('invalid-topology',
              'Could not load topology %s (%s)' % (path, err))

    return ClusterSpec.from_dict(document)


NAME_RE = re.compile(r'^L(?P<nodes>\d+)(?P<outer>-outer)?$|^(?P<rails>\d+)R$')


def topology_from_name(name):
    """
    Resolve 'L<M>', 'L<M>-outer', '<N>R', or a path to a topology
    document.
    """
    match = NAME_RE.match(name)
    if match:
        if match.group('rails'):
            return nrail(int(match.group('rails')))
        arrangement = OUTER if match.group('outer') else INNER
        return linear_chain(int(match.group('nodes')), arrangement)

    if os.path.exists(name):
        return load_topology(name)

    error('invalid-topology', 'Unknown topology %s' % name)
