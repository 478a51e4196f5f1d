"""Dependency labeler: one encoded label per arc.

The modifiers of each head form a single chain, sorted by sentence
position regardless of side, and labels are decoded per head with exact
Viterbi; heads are independent of each other.  Scores are a sum of
arc-label features (the parser's 34 arc templates conjoined with the
label) and pairwise features over consecutive chain elements (a POS
triplet and its three unilexical variants, conjoined with the label
pair).  The root word is the single modifier of the virtual root 0 and
gets its label the same way, so a scheme's root-slot labels are learned
like any others.

Ties break toward the first label in the sorted alphabet.
"""

import numpy as np

from .baseline_parser import ROOT_TOKEN, featurize_arc
from .encoding import EncodedDTree
from .errors import ToolkitError
from .kernels import viterbi_chain
from .perceptron import (
    DIM_BITS, AveragedTrainer, LinearModel, conjoin_grid, hash_features)
from .rng import Rng
from .trees import validate


def featurize_pairwise(sentence, h, m, m2):
    """Features for consecutive modifiers m < m2 of head h: the POS
    triplet (head, earlier, later) and its three unilexical variants."""
    if h == 0:
        hf = hp = ROOT_TOKEN
    else:
        hf, hp = sentence.form(h), sentence.pos(h)
    mf, mp = sentence.form(m), sentence.pos(m)
    m2f, m2p = sentence.form(m2), sentence.pos(m2)
    return [
        'ppp:' + hp + ' ' + mp + ' ' + m2p,
        'wpp:' + hf + ' ' + mp + ' ' + m2p,
        'pwp:' + hp + ' ' + mf + ' ' + m2p,
        'ppw:' + hp + ' ' + mp + ' ' + m2f,
    ]


def _chains(sentence, heads):
    """(head, [modifiers ascending]) for every head with modifiers,
    virtual root included, in ascending head order."""
    by_head = {}
    for m, h in enumerate(heads, 1):
        by_head.setdefault(h, []).append(m)
    return [(h, sorted(ms)) for h, ms in sorted(by_head.items())]


def _chain_index_tables(model, sentence, h, chain, n_labels):
    """Pre-masked weight indices for one chain: unary (T, K, 34) and
    pairwise (T, K*K, 4); pairwise row 0 is unused and stays zero."""
    T = len(chain)
    mask = np.uint64(model.mask)
    unary = np.empty((T, n_labels, 34), dtype=np.intp)
    pair = np.zeros((T, n_labels * n_labels, 4), dtype=np.intp)
    for t, m in enumerate(chain):
        hashes = hash_features(featurize_arc(sentence, h, m))
        unary[t] = (conjoin_grid(hashes, n_labels) & mask).astype(np.intp)
        if t:
            hashes = hash_features(
                featurize_pairwise(sentence, h, chain[t - 1], m))
            pair[t] = (conjoin_grid(hashes, n_labels * n_labels)
                       & mask).astype(np.intp)
    return unary, pair


def _decode_chain(weights, unary, pair, n_labels):
    T = unary.shape[0]
    emis = weights[unary].sum(axis=2)
    trans = weights[pair].sum(axis=2).reshape(T, n_labels, n_labels)
    path, _ = viterbi_chain(emis, trans)
    return path


def train_labeler(corpus, epochs, seed=1, dim_bits=DIM_BITS):
    """Averaged perceptron over per-head chains with the gold tree
    structure fixed; sentence order reshuffles every epoch."""
    corpus = list(corpus)
    if not corpus:
        raise ToolkitError('empty corpus')
    labels = set()
    for enc in corpus:
        problems = validate(enc)
        if problems:
            raise ToolkitError('bad tree in labeler corpus: ' + problems[0])
        labels.update(enc.labels)
    alphabet = sorted(labels)
    label_id = {lab: k for k, lab in enumerate(alphabet)}
    K = len(alphabet)
    prune = {}
    for enc in corpus:
        for h, m, lab in enc.arcs():
            key = _prune_key(enc.sentence, h, m)
            prune.setdefault(key, set()).add(label_id[lab])
        root = enc.root()
        key = _prune_key(enc.sentence, 0, root)
        prune.setdefault(key, set()).add(label_id[enc.labels[root - 1]])
    model = LinearModel(dim_bits, meta={
        'task': 'labels', 'labels': alphabet, 'hash': 'blake2b-64',
        'prune': {k: sorted(v) for k, v in sorted(prune.items())}})
    trainer = AveragedTrainer(model)
    cached = []
    for enc in corpus:
        per_tree = []
        for h, chain in _chains(enc.sentence, enc.heads):
            unary, pair = _chain_index_tables(
                model, enc.sentence, h, chain, K)
            gold = [label_id[enc.labels[m - 1]] for m in chain]
            per_tree.append((unary, pair, gold))
        cached.append(per_tree)
    rng = Rng(seed)
    order = list(range(len(corpus)))
    for _ in range(epochs):
        rng.shuffle(order)
        for i in order:
            trainer.begin_example()
            for unary, pair, gold in cached[i]:
                pred = _decode_chain(model.weights, unary, pair, K)
                if pred == gold:
                    continue
                for t, (g, p) in enumerate(zip(gold, pred)):
                    if g != p:
                        trainer.update_indices(unary[t, g], 1.0)
                        trainer.update_indices(unary[t, p], -1.0)
                    if t and (gold[t - 1], g) != (pred[t - 1], p):
                        trainer.update_indices(
                            pair[t, gold[t - 1] * K + g], 1.0)
                        trainer.update_indices(
                            pair[t, pred[t - 1] * K + p], -1.0)
    return trainer.average()


def _prune_key(sentence, h, m):
    hp = sentence.pos(h) if h else ROOT_TOKEN
    return hp + '|' + ('R' if m > h else 'L')


def label_tree(sentence, heads, model, prune=False):
    """Label every arc of a head vector; returns an EncodedDTree.

    With prune=True, candidates at each arc are restricted to labels seen
    in training for the (head POS, direction) pair; arcs with no record
    fall back to the full alphabet.
    """
    alphabet = model.meta.get('labels', [])
    if not alphabet:
        raise ToolkitError('labeler model has an empty alphabet')
    K = len(alphabet)
    prune_map = model.meta.get('prune', {}) if prune else {}
    out = [None] * len(sentence)
    for h, chain in _chains(sentence, heads):
        unary, pair = _chain_index_tables(model, sentence, h, chain, K)
        if prune_map:
            emis = model.weights[unary].sum(axis=2)
            for t, m in enumerate(chain):
                allowed = prune_map.get(_prune_key(sentence, h, m))
                if allowed:
                    blocked = np.ones(K, dtype=bool)
                    blocked[allowed] = False
                    emis[t, blocked] = -np.inf
            trans = model.weights[pair].sum(axis=2).reshape(len(chain), K, K)
            path, _ = viterbi_chain(emis, trans)
        else:
            path = _decode_chain(model.weights, unary, pair, K)
        for m, k in zip(chain, path):
            out[m - 1] = alphabet[k]
    return EncodedDTree(sentence, tuple(heads), tuple(out))
