"""Label encodings that make a head-ordered d-tree trainable as a plain
labeled dependency tree.

Three schemes share the textual shape ``<body>#<number>``:

* direct:  body is the constituent label, number the absolute order index.
* delta:   number is the difference to the previous index on the same side
  of the head, walking outward (the innermost modifier keeps its absolute
  index).  Requires a projective and nested input; differences are >= 0
  exactly because of nesting, and index alphabets shrink on treebanks with
  deep spines.
* hn:      body is the modifier's own spine (proper-node labels top-first,
  '|'-joined, '∅' when empty) and the number is the attachment step on the
  head's spine.  The root word's spine travels in the root slot as
  ``<spine>#0`` since it sits on no arc.

'#', '|' and '\\' occurring inside labels are escaped at encode time and
restored by decode.  decode never raises on predicted input: unparseable
labels fall back to (full string, 1) and bump a warning counter.
"""

from dataclasses import dataclass

from .errors import TreeStructureError
from .reduction import ctree_to_dtree
from .trees import PROPER, is_nested, is_projective, spine as tree_spine

ROOT_LABEL = '_root_'
EMPTY_SPINE = '∅'


@dataclass(frozen=True)
class EncodedDTree:
    """Dependency tree with one encoded label per token; the root slot
    holds ROOT_LABEL (or the root spine for the hn scheme)."""
    sentence: 'Sentence'
    heads: tuple[int, ...]
    labels: tuple[str, ...]

    def root(self):
        return self.heads.index(0) + 1

    def arcs(self):
        for m, h in enumerate(self.heads, 1):
            if h != 0:
                yield h, m, self.labels[m - 1]


@dataclass(frozen=True)
class SpineAnnotation:
    """Proper-node labels above one token, topmost first."""
    position: int
    labels: tuple[str, ...]


@dataclass
class DecodeResult:
    """Per-token (label, order index) pairs, None at the root slot; for
    the hn scheme also every token's spine."""
    pairs: tuple
    warnings: int = 0
    spines: tuple[SpineAnnotation, ...] | None = None


def escape_label(label):
    return (label.replace('\\', '\\\\')
            .replace('#', '\\#').replace('|', '\\|'))


def unescape_label(label):
    out = []
    i = 0
    while i < len(label):
        if label[i] == '\\' and i + 1 < len(label):
            out.append(label[i + 1])
            i += 2
        else:
            out.append(label[i])
            i += 1
    return ''.join(out)


def _split_tail(label):
    """Split at the last unescaped '#'; returns (body, tail) or None."""
    i = len(label) - 1
    while i >= 0:
        if label[i] == '#':
            backslashes = 0
            j = i - 1
            while j >= 0 and label[j] == '\\':
                backslashes += 1
                j -= 1
            if backslashes % 2 == 0:
                return label[:i], label[i + 1:]
        i -= 1
    return None


def _split_spine(body):
    """Split an hn spine body at unescaped '|' separators."""
    parts = []
    current = []
    i = 0
    while i < len(body):
        if body[i] == '\\' and i + 1 < len(body):
            current.append(body[i])
            current.append(body[i + 1])
            i += 2
        elif body[i] == '|':
            parts.append(''.join(current))
            current = []
            i += 1
        else:
            current.append(body[i])
            i += 1
    parts.append(''.join(current))
    return parts


def encode_direct(dtree):
    """Label each arc as <label>#<absolute order index>."""
    labels = [ROOT_LABEL] * len(dtree.sentence)
    for arc in dtree.arcs:
        labels[arc.modifier - 1] = f'{escape_label(arc.label)}#{arc.order_index}'
    return EncodedDTree(dtree.sentence, dtree.heads(), tuple(labels))


def _sides(positions, h):
    """Modifiers of h split by side, each sorted head-outward."""
    return (sorted((m for m in positions if m < h), key=lambda m: h - m),
            sorted((m for m in positions if m > h), key=lambda m: m - h))


def encode_delta(dtree):
    """Difference-encode order indices per side of each head."""
    if not (is_projective(dtree) and is_nested(dtree)):
        raise TreeStructureError(
            'delta encoding needs a projective and nested tree')
    labels = [ROOT_LABEL] * len(dtree.sentence)
    arcs_of = {arc.modifier: arc for arc in dtree.arcs}
    for h, arcs in dtree.modifiers_by_head().items():
        for side in _sides([a.modifier for a in arcs], h):
            previous = None
            for m in side:
                arc = arcs_of[m]
                d = arc.order_index if previous is None else arc.order_index - previous
                previous = arc.order_index
                labels[m - 1] = f'{escape_label(arc.label)}#{d}'
    return EncodedDTree(dtree.sentence, dtree.heads(), tuple(labels))


def _spine_body(labels):
    if not labels:
        return EMPTY_SPINE
    return '|'.join(escape_label(lb) for lb in labels)


def encode_hn(tree):
    """Spine-chain encoding computed from the constituent tree itself:
    each arc records its modifier's spine and the attachment step; unary
    constituents therefore survive inside the labels."""
    dtree = ctree_to_dtree(tree)
    spines = {
        h: tuple(n.label for n in tree_spine(tree, h) if n.kind == PROPER)
        for h in range(1, len(tree.sentence) + 1)}
    labels = [ROOT_LABEL] * len(tree.sentence)
    for arc in dtree.arcs:
        labels[arc.modifier - 1] = (
            f'{_spine_body(spines[arc.modifier])}#{arc.order_index}')
    labels[dtree.root - 1] = f'{_spine_body(spines[dtree.root])}#0'
    return EncodedDTree(dtree.sentence, dtree.heads(), tuple(labels))


def _parse_pair(label):
    """(body, index, ok): ok=False means the unparseable-label fallback."""
    split = _split_tail(label)
    if split is None:
        return label, 1, False
    body, tail = split
    try:
        idx = int(tail)
    except ValueError:
        return label, 1, False
    return body, idx, True


def decode(enc, scheme):
    """Parse encoded labels back to (label, order index) pairs.

    Exact inverse on encoder output; on arbitrary predicted labels it
    degrades gracefully and counts every fallback in .warnings.  The
    result feeds reduction.recover_order.
    """
    if scheme == 'direct':
        return _decode_direct(enc)
    if scheme == 'delta':
        return _decode_delta(enc)
    if scheme == 'hn':
        return _decode_hn(enc)
    raise ValueError(f'unknown encoding scheme {scheme!r}')


def _decode_direct(enc):
    pairs = [None] * len(enc.heads)
    warnings = 0
    for h, m, label in enc.arcs():
        body, idx, ok = _parse_pair(label)
        if not ok:
            warnings += 1
            pairs[m - 1] = (body, idx)
        else:
            pairs[m - 1] = (unescape_label(body), idx)
    return DecodeResult(tuple(pairs), warnings)


def _decode_delta(enc):
    pairs = [None] * len(enc.heads)
    warnings = 0
    parsed = {}
    by_head = {}
    for h, m, label in enc.arcs():
        body, d, ok = _parse_pair(label)
        if not ok:
            warnings += 1
        elif d < 0:
            d = 0
            warnings += 1
        parsed[m] = (unescape_label(body) if ok else body, d)
        by_head.setdefault(h, []).append(m)
    for h, positions in by_head.items():
        for side in _sides(positions, h):
            previous = None
            for m in side:
                body, d = parsed[m]
                idx = d if previous is None else previous + d
                previous = idx
                pairs[m - 1] = (body, idx)
    return DecodeResult(tuple(pairs), warnings)


def _decode_hn(enc):
    n = len(enc.heads)
    warnings = 0
    spines = {}
    attach = {}
    for h, m, label in enc.arcs():
        body, idx, ok = _parse_pair(label)
        if not ok:
            warnings += 1
            spines[m] = (body,)
        elif body == EMPTY_SPINE:
            spines[m] = ()
        else:
            spines[m] = tuple(unescape_label(p) for p in _split_spine(body))
        attach[m] = (idx, label)
    root = enc.root()
    root_body, root_idx, ok = _parse_pair(enc.labels[root - 1])
    if ok and root_idx == 0 and root_body != ROOT_LABEL:
        spines[root] = (() if root_body == EMPTY_SPINE else
                        tuple(unescape_label(p) for p in _split_spine(root_body)))
    else:
        # predicted input: the root spine never reaches us
        spines[root] = ()
    pairs = [None] * n
    for m, h in enumerate(enc.heads, 1):
        if h == 0:
            continue
        idx, raw = attach[m]
        head_spine = spines.get(h, ())
        if 1 <= idx <= len(head_spine):
            label = head_spine[len(head_spine) - idx]
        else:
            warnings += 1
            if head_spine:
                label = head_spine[0]
            elif spines[m]:
                label = spines[m][0]
            else:
                label = raw
        pairs[m - 1] = (label, idx)
    annotations = tuple(
        SpineAnnotation(p, spines.get(p, ())) for p in range(1, n + 1))
    return DecodeResult(tuple(pairs), warnings, annotations)


def label_alphabet(corpus):
    """Distinct arc labels with occurrence counts, sorted by label; the
    root slot does not count."""
    counts = {}
    for enc in corpus:
        for _, _, label in enc.arcs():
            counts[label] = counts.get(label, 0) + 1
    return sorted(counts.items())
