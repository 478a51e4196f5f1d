import pytest

from hodt.corpus_gen import GenConfig, gen_ctree
from hodt.encoding import ROOT_LABEL, encode_direct
from hodt.errors import TreebankFormatError
from hodt.headrules import lexicalize, load_rules
from hodt.reduction import ctree_to_dtree
from hodt.treebank_io import (
    read_bracketed, read_conll, read_export, read_json_corpus,
    write_bracketed, write_conll, write_export, write_json_corpus)
from hodt.trees import RawLeaf, RawNode, Sentence, Token, unlexicalize

ENGLISH_LINE = ('(S (NP (DT The) (NN public)) (VP (VBZ is) (ADVP (RB still))'
                ' (ADJP (JJ cautious))) (. .))')

GERMAN_RULES = load_rules([
    'default right',
    'VROOT left-to-right S',
    'S left-to-right VVFIN',
    'NP right-to-left NN NP',
])


def _canonical(raw):
    """format-neutral shape: children ordered by leftmost position."""
    if isinstance(raw, RawLeaf):
        return ('leaf', raw.position, raw.form, raw.pos, raw.lemma, raw.morph)
    kids = sorted((_canonical(c) for c in raw.children), key=lambda t: t[1])
    return ('node', kids[0][1], raw.label, tuple(kids))


def test_read_bracketed_english_shape():
    (tree,) = read_bracketed(ENGLISH_LINE)
    assert tree == RawNode('S', (
        RawNode('NP', (RawLeaf(1, 'The', 'DT'), RawLeaf(2, 'public', 'NN'))),
        RawNode('VP', (RawLeaf(3, 'is', 'VBZ'),
                       RawNode('ADVP', (RawLeaf(4, 'still', 'RB'),)),
                       RawNode('ADJP', (RawLeaf(5, 'cautious', 'JJ'),)))),
        RawLeaf(6, '.', '.')))


def test_read_bracketed_wrapper():
    (tree,) = read_bracketed('((X (T w)))')
    assert tree == RawNode('X', (RawLeaf(1, 'w', 'T'),))


def test_read_bracketed_blank_lines_skipped():
    trees = read_bracketed('\n' + ENGLISH_LINE + '\n\n(X (T w))\n')
    assert len(trees) == 2


def test_read_bracketed_errors():
    with pytest.raises(TreebankFormatError) as err:
        read_bracketed('(S (NP')
    assert err.value.line == 1
    with pytest.raises(TreebankFormatError) as err:
        read_bracketed('(X (T w))\n(S (NP a b)) extra)')
    assert err.value.line == 2
    with pytest.raises(TreebankFormatError):
        read_bracketed('(S (NP (DT the) word))')   # word outside preterminal
    with pytest.raises(TreebankFormatError):
        read_bracketed('word')


def test_write_bracketed_english(english_tree):
    assert write_bracketed([english_tree]) == ENGLISH_LINE + '\n'


def test_write_bracketed_rejects_discontinuous(german_tree):
    with pytest.raises(TreebankFormatError) as err:
        write_bracketed([german_tree])
    assert 'export' in str(err.value)


def test_bracketed_roundtrip(english_tree):
    text = write_bracketed([english_tree])
    (raw,) = read_bracketed(text)
    assert raw == unlexicalize(english_tree)


def test_export_roundtrip_german(german_tree):
    text = write_export([german_tree])
    (raw,) = read_export(text)
    relex = lexicalize(raw, GERMAN_RULES)
    assert relex == german_tree


def test_export_v4_preserves_lemma_morph():
    sent = Sentence((Token(1, 'Hunde', 'NN', 'Hund', 'Pl'),
                     Token(2, 'bellen', 'VVFIN', 'bellen', None)))
    from hodt.trees import CTree, preterminal, proper
    tree = CTree(proper('S', 2, (preterminal('NN', 1, 'Hunde'),
                                 preterminal('VVFIN', 2, 'bellen'))), sent)
    text = write_export([tree], version=4)
    assert text.startswith('#FORMAT 4\n')
    (raw,) = read_export(text)          # version sniffed from #FORMAT
    leaves = sorted(
        (leaf for leaf in _iter_leaves(raw)), key=lambda l: l.position)
    assert [(l.lemma, l.morph) for l in leaves] == [('Hund', 'Pl'),
                                                    ('bellen', None)]


def _iter_leaves(raw):
    if isinstance(raw, RawLeaf):
        yield raw
        return
    for c in raw.children:
        yield from _iter_leaves(c)


def test_export_vroot_synthesis():
    block = '\n'.join([
        '#BOS 1',
        'Ja\tADV\t--\t--\t0',
        'klar\tADJD\t--\t--\t500',
        '#500\tAP\t--\t--\t0',
        '#EOS 1',
    ])
    (raw,) = read_export(block)
    assert raw.label == 'VROOT'
    assert len(raw.children) == 2


def test_export_single_token_block():
    block = '#BOS 1\nJa\tADV\t--\t--\t0\n#EOS 1\n'
    (raw,) = read_export(block)
    assert raw == RawNode('VROOT', (RawLeaf(1, 'Ja', 'ADV'),))


def test_export_errors():
    dangling = '#BOS 1\nJa\tADV\t--\t--\t777\n#EOS 1\n'
    with pytest.raises(TreebankFormatError) as err:
        read_export(dangling)
    assert '777' in str(err.value)

    dup = '\n'.join([
        '#BOS 1', 'a\tX\t--\t--\t500', 'b\tX\t--\t--\t501',
        '#500\tA\t--\t--\t501', '#501\tB\t--\t--\t0',
        '#500\tA\t--\t--\t501', '#EOS 1'])
    with pytest.raises(TreebankFormatError) as err:
        read_export(dup)
    assert 'duplicate' in str(err.value)

    cycle = '\n'.join([
        '#BOS 1', 'a\tX\t--\t--\t500',
        '#500\tA\t--\t--\t501', '#501\tB\t--\t--\t500', '#EOS 1'])
    with pytest.raises(TreebankFormatError):
        read_export(cycle)

    with pytest.raises(TreebankFormatError):
        read_export('#BOS 1\na\tX\t--\t--\t0\n')   # unterminated

    with pytest.raises(TreebankFormatError):
        read_export('#BOS 1\n#BOS 2\n#EOS 2\n')


def test_export_roundtrip_generated_discontinuous():
    cfg = GenConfig(seed=7, discontinuity_probability=0.5,
                    unary_probability=0.3)
    trees = [gen_ctree(cfg, 2 + i % 7, index=i) for i in range(30)]
    text = write_export(trees)
    raws = read_export(text)
    assert len(raws) == 30
    for tree, raw in zip(trees, raws):
        assert _canonical(raw) == _canonical(unlexicalize(tree))


def test_conll_english_columns(english_tree):
    enc = encode_direct(ctree_to_dtree(english_tree))
    text = write_conll([enc])
    rows = [l.split('\t') for l in text.strip().split('\n')]
    assert [r[6] for r in rows] == ['2', '3', '0', '3', '3', '3']
    assert [r[7] for r in rows] == [
        'NP#1', 'S#2', ROOT_LABEL, 'VP#1', 'VP#1', 'S#2']
    assert all(len(r) == 10 for r in rows)


def test_conll_roundtrip(english_tree, german_tree):
    corpus = [encode_direct(ctree_to_dtree(t))
              for t in (english_tree, german_tree)]
    text = write_conll(corpus)
    assert read_conll(text) == corpus


def test_conll_roundtrip_generated():
    cfg = GenConfig(seed=11, discontinuity_probability=0.25)
    corpus = [encode_direct(ctree_to_dtree(gen_ctree(cfg, 2 + i % 6, index=i)))
              for i in range(50)]
    assert read_conll(write_conll(corpus)) == corpus


def test_conll_empty_stream():
    assert read_conll('') == []
    assert read_conll('\n\n') == []


def test_conll_root_repair_multiple():
    rows = ['1\ta\t_\tX\tX\t_\t0\t%s\t_\t_' % ROOT_LABEL,
            '2\tb\t_\tX\tX\t_\t0\tA#1\t_\t_']
    stats = {}
    (enc,) = read_conll('\n'.join(rows), stats=stats)
    assert enc.heads == (0, 1)
    assert stats['root_repairs'] == 1
    with pytest.raises(TreebankFormatError):
        read_conll('\n'.join(rows), on_root_anomaly='reject')


def test_conll_root_repair_none():
    rows = ['1\ta\t_\tX\tX\t_\t2\tA#1\t_\t_',
            '2\tb\t_\tX\tX\t_\t1\tB#1\t_\t_']
    stats = {}
    (enc,) = read_conll('\n'.join(rows), stats=stats)
    assert enc.heads.count(0) == 1
    assert stats['root_repairs'] == 1
    assert enc.labels[0] == ROOT_LABEL


def test_conll_cycle_repair():
    rows = ['1\ta\t_\tX\tX\t_\t0\t%s\t_\t_' % ROOT_LABEL,
            '2\tb\t_\tX\tX\t_\t3\tA#1\t_\t_',
            '3\tc\t_\tX\tX\t_\t2\tA#1\t_\t_']
    stats = {}
    (enc,) = read_conll('\n'.join(rows), stats=stats)
    assert stats['cycle_repairs'] >= 1
    # every token now reaches the root
    for start in range(1, 4):
        seen = set()
        v = start
        while v != 0:
            assert v not in seen
            seen.add(v)
            v = enc.heads[v - 1]
    with pytest.raises(TreebankFormatError):
        read_conll('\n'.join(rows), on_root_anomaly='reject')


def test_conll_errors():
    with pytest.raises(TreebankFormatError) as err:
        read_conll('1\ta\t_\tX\tX\t_\tzz\tL\t_\t_')
    assert 'HEAD' in str(err.value)
    with pytest.raises(TreebankFormatError):
        read_conll('1\ta\t_\tX\tX\t_\t9\tL\t_\t_')   # head out of range
    with pytest.raises(TreebankFormatError):
        read_conll('5\ta\t_\tX\tX\t_\t0\tL\t_\t_')   # id mismatch
    with pytest.raises(TreebankFormatError):
        read_conll('1\ta\tX\t0\tL')                  # wrong column count


def test_json_roundtrip(english_tree, german_tree):
    text = write_json_corpus([english_tree, german_tree])
    assert read_json_corpus(text) == [english_tree, german_tree]
    assert len(text.strip().split('\n')) == 2


def test_json_bad_input():
    with pytest.raises(TreebankFormatError) as err:
        read_json_corpus('{"tokens": [[')
    assert err.value.line == 1
    with pytest.raises(TreebankFormatError):
        read_json_corpus('{"tokens": [["a", "X", null, null]], "root": {}}')
