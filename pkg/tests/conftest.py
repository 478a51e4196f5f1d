"""Shared fixtures: the two worked-example trees and small helpers.

The English sample is continuous with two unary wrappers; the German one
is discontinuous with a two-level NP spine.  Both reappear across the
conversion, encoding and acceptance tests.
"""

import pytest

from hodt.corpus_gen import TOY_HEAD_RULES
from hodt.headrules import load_rules
from hodt.trees import CTree, Sentence, Token, preterminal, proper


def make_sentence(*pairs):
    return Sentence(tuple(
        Token(i, form, pos) for i, (form, pos) in enumerate(pairs, 1)))


@pytest.fixture(scope='session')
def english_tree():
    sent = make_sentence(
        ('The', 'DT'), ('public', 'NN'), ('is', 'VBZ'),
        ('still', 'RB'), ('cautious', 'JJ'), ('.', '.'))
    pre = {i: preterminal(t.pos, i, t.form) for i, t in
           zip(range(1, 7), sent)}
    np = proper('NP', 2, (pre[1], pre[2]))
    advp = proper('ADVP', 4, (pre[4],))
    adjp = proper('ADJP', 5, (pre[5],))
    vp = proper('VP', 3, (pre[3], advp, adjp))
    s = proper('S', 3, (np, vp, pre[6]))
    return CTree(s, sent)


@pytest.fixture(scope='session')
def english_tree_unaryless():
    sent = make_sentence(
        ('The', 'DT'), ('public', 'NN'), ('is', 'VBZ'),
        ('still', 'RB'), ('cautious', 'JJ'), ('.', '.'))
    pre = {i: preterminal(t.pos, i, t.form) for i, t in
           zip(range(1, 7), sent)}
    np = proper('NP', 2, (pre[1], pre[2]))
    vp = proper('VP', 3, (pre[3], pre[4], pre[5]))
    s = proper('S', 3, (np, vp, pre[6]))
    return CTree(s, sent)


@pytest.fixture(scope='session')
def german_tree():
    # positions 1,3,4 form one NP wrapped in two levels; the verb at 2
    # splits it, so the NP yield has a gap
    sent = make_sentence(
        ('das', 'PDS'), ('steht', 'VVFIN'), ('keiner', 'PIAT'),
        ('Liste', 'NN'), ('.', '$.'))
    pre = {i: preterminal(t.pos, i, t.form) for i, t in
           zip(range(1, 6), sent)}
    np_inner = proper('NP', 4, (pre[3], pre[4]))
    np_outer = proper('NP', 4, (pre[1], np_inner))
    s = proper('S', 2, (np_outer, pre[2]))
    vroot = proper('VROOT', 2, (s, pre[5]))
    return CTree(vroot, sent)


@pytest.fixture(scope='session')
def toy_rules():
    return load_rules(TOY_HEAD_RULES.splitlines())


def arc_set(dtree):
    return {(a.head, a.modifier, a.label, a.order_index)
            for a in dtree.arcs}
