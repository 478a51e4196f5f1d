"""Conversion between constituent trees and head-ordered dependency trees.

ctree_to_dtree walks the constituent tree bottom-up keeping one counter
per head word (how far up that word's spine we are); every non-head child
of a constituent becomes an arc labeled with the constituent label and the
current counter value.  dtree_to_ctree inverts this: per head word, one
constituent per distinct order index, built in increasing index order.
Both are linear in the number of nodes.

recover_order turns arbitrary predicted (label, index) pairs into a valid
head-ordered tree: same-index modifiers of a head are forced to share a
label, indices are lowered where they would break nesting (continuous
mode), and index values are compacted to 1..J.
"""

from dataclasses import dataclass

from .errors import TreeStructureError
from .trees import (
    Arc, CTree, HeadOrderedDTree, is_continuous, is_nested, is_projective,
    postorder_proper, preterminal, proper, strip_unaries)


def ctree_to_dtree(tree, stats=None):
    """Reduce a constituent tree to a head-ordered dependency tree.

    Unary constituents advance their head's counter but emit no arcs, so
    order indices can have gaps when the input is not unaryless.
    Preterminals are not counted: the first constituent above a word's
    preterminal is step 1.
    """
    next_index = {}
    arcs = []
    visits = 0
    for node in postorder_proper(tree.root):
        visits += 1
        h = node.head
        j = next_index.get(h, 1)
        for child in node.children:
            if child.head != h:
                arcs.append(Arc(h, child.head, node.label, j))
        next_index[h] = j + 1
    if stats is not None:
        stats['visits'] = visits
    return HeadOrderedDTree.from_arcs(tree.sentence, arcs, tree.root.head)


def _dep_postorder(heads, root):
    children = {}
    for m, h in enumerate(heads, 1):
        children.setdefault(h, []).append(m)
    out = []
    stack = [root]
    while stack:
        v = stack.pop()
        out.append(v)
        stack.extend(children.get(v, ()))
    out.reverse()
    return out


def dtree_to_ctree(dtree, stats=None):
    """Rebuild the constituent tree encoded by a head-ordered d-tree.

    Rejects trees where two same-index arcs of a head disagree on the
    label; run recover_order first on predicted input.
    """
    sentence = dtree.sentence
    heads = dtree.heads()
    by_head = dtree.modifiers_by_head()
    psi = {}
    visits = 0
    for h in _dep_postorder(heads, dtree.root):
        visits += 1
        tok = sentence.token(h)
        node = preterminal(tok.pos, h, tok.form)
        classes = {}
        for arc in by_head.get(h, ()):
            classes.setdefault(arc.order_index, []).append(arc)
        for j in sorted(classes):
            group = classes[j]
            labels = {arc.label for arc in group}
            if len(labels) != 1:
                raise TreeStructureError(
                    f'head {h}, step {j}: conflicting labels {sorted(labels)}')
            node = proper(
                group[0].label, h,
                [node] + [psi[arc.modifier] for arc in group])
        psi[h] = node
    if stats is not None:
        stats['visits'] = visits
    return CTree(psi[dtree.root], sentence)


@dataclass
class RepairStats:
    """What recover_order had to change; all zero on already-valid input."""
    labels_changed: int = 0
    indices_lowered: int = 0
    indices_clamped: int = 0
    tokens_changed: int = 0

    def total(self):
        return self.labels_changed + self.indices_lowered + self.indices_clamped


def recover_order(tree, continuous_mode=False):
    """Turn per-token (label, index) pairs into a valid HeadOrderedDTree.

    tree is a plain DTree whose labels field holds (label, order_index)
    pairs, None at the root slot.  Total on any tree-shaped input: bad
    indices are clamped to >= 1, same-index conflicts resolve to the label
    of the modifier closest to the head (ties toward the left modifier),
    and in continuous mode an index is lowered to its outer neighbour's
    value wherever nesting would break.  Indices are finally compacted to
    1..J per head.  Returns (tree, RepairStats); idempotent.
    """
    heads = tree.heads
    stats = RepairStats()
    mods = {}
    given = {}
    for m, h in enumerate(heads, 1):
        if h == 0:
            continue
        label, idx = tree.labels[m - 1]
        idx = int(idx)
        if idx < 1:
            idx = 1
            stats.indices_clamped += 1
        mods.setdefault(h, []).append(m)
        given[m] = (label, idx)
    index = {m: given[m][1] for m in given}
    arcs = []
    for h in sorted(mods):
        positions = mods[h]
        if continuous_mode:
            for side in (
                    sorted((m for m in positions if m < h), key=lambda m: h - m),
                    sorted((m for m in positions if m > h), key=lambda m: m - h)):
                cap = None  # index of the next modifier outward
                for m in reversed(side):
                    if cap is not None and index[m] > cap:
                        index[m] = cap
                        stats.indices_lowered += 1
                    cap = index[m]
        classes = {}
        for m in positions:
            classes.setdefault(index[m], []).append(m)
        ranks = {j: rank for rank, j in enumerate(sorted(classes), 1)}
        for j, members in classes.items():
            # closest modifier wins the label; equidistant -> the left one
            winner = min(members, key=lambda m: (abs(h - m), m > h))
            label = given[winner][0]
            for m in members:
                if given[m][0] != label:
                    stats.labels_changed += 1
                arcs.append(Arc(h, m, label, ranks[j]))
    result = HeadOrderedDTree.from_arcs(tree.sentence, arcs, tree.root())
    final = {arc.modifier: (arc.label, arc.order_index) for arc in result.arcs}
    stats.tokens_changed = sum(
        1 for m, pair in given.items() if final[m] != pair)
    return result, stats


@dataclass
class RoundtripReport:
    """Per-tree diagnostics produced by roundtrip_check."""
    roundtrip_equal: bool
    continuous: bool
    projective: bool
    nested: bool
    binary_input: bool
    strictly_ordered: bool

    @property
    def equivalence_ok(self):
        """Continuity must coincide with projectivity plus nesting."""
        return self.continuous == (self.projective and self.nested)

    @property
    def ok(self):
        return (self.roundtrip_equal and self.equivalence_ok
                and (not self.binary_input or self.strictly_ordered))


def roundtrip_check(tree):
    """Check the conversion laws on one constituent tree."""
    stripped = strip_unaries(tree)
    dtree = ctree_to_dtree(tree)
    rebuilt = dtree_to_ctree(dtree)
    by_head = dtree.modifiers_by_head()
    strictly = all(
        len(set(a.order_index for a in arcs)) == len(arcs)
        for arcs in by_head.values())
    binary = all(
        len(n.children) == 2 for n in postorder_proper(stripped.root))
    return RoundtripReport(
        roundtrip_equal=rebuilt == stripped,
        continuous=is_continuous(tree),
        projective=is_projective(dtree),
        nested=is_nested(dtree),
        binary_input=binary,
        strictly_ordered=strictly)
