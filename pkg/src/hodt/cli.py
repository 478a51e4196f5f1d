"""Command-line front end.

Subcommands:
  convert   c-treebank -> encoded dependency corpus (CoNLL columns)
  train     fit the arc scorer, the label chain scorer and (optionally)
            the unary restorer; writes a model bundle directory
  parse     tagged text or CoNLL tokens -> constituent trees
  eval      bracket or attachment scoring, JSON report on stdout
  check     roundtrip / equivalence audit of a treebank, exit 2 on violations
  gen       synthetic treebanks (toy grammar or random trees)

Every code path is deterministic for a fixed seed: two runs produce
byte-identical outputs, bundles included.
"""

import argparse
import functools
import hashlib
import json
import os
import sys

from .baseline_parser import parse_heads, train_unlabeled
from .corpus_gen import GenConfig, TOY_HEAD_RULES, gen_ctree, gen_toy_treebank
from .dep_labeler import label_tree, train_labeler
from .encoding import (decode, encode_delta, encode_direct, encode_hn,
                       label_alphabet)
from .errors import ModelFormatError, ToolkitError, TreebankFormatError
from .evaluation import EvalConfig, attachment_scores, evalb
from .headrules import LEFTMOST, RIGHTMOST, lexicalize, load_rules
from .perceptron import LinearModel
from .reduction import (ctree_to_dtree, dtree_to_ctree, recover_order,
                        roundtrip_check)
from .treebank_io import (read_bracketed, read_conll, read_export,
                          read_json_corpus, write_bracketed, write_conll,
                          write_export, write_json_corpus)
from .trees import DTree, Sentence, Token, strip_unaries, validate
from .unary_recovery import extract_instances, recover, train_unary

ENCODINGS = ('direct', 'delta', 'hn')
MODES = ('continuous', 'discontinuous')


# --- i/o plumbing -----------------------------------------------------------

def _read_input(path):
    if path == '-':
        return sys.stdin.read()
    with open(path, encoding='utf-8') as f:
        return f.read()


def _write_output(path, text):
    if path == '-':
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)


def _sniff_format(text):
    for line in text.split('\n'):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith('#FORMAT') or stripped.startswith('#BOS'):
            return 'export'
        if stripped.startswith('{'):
            return 'json'
        if stripped.startswith('('):
            return 'bracketed'
        cols = stripped.split('\t')
        if len(cols) >= 10 and cols[0].isdigit():
            return 'conll'
        return 'tagged'
    raise ToolkitError('empty input')


def _resolve_rules(spec):
    """Builtin name or file path -> (HeadRuleSet, fingerprint text)."""
    if spec == 'leftmost':
        return LEFTMOST, 'builtin:leftmost'
    if spec == 'rightmost':
        return RIGHTMOST, 'builtin:rightmost'
    if spec == 'toy':
        return load_rules(TOY_HEAD_RULES.splitlines()), TOY_HEAD_RULES
    if spec == 'collins-english':
        data = os.path.join(os.path.dirname(__file__), 'data',
                            'collins_english.rules')
        with open(data, encoding='utf-8') as f:
            text = f.read()
        return load_rules(text.splitlines()), text
    if os.path.exists(spec):
        with open(spec, encoding='utf-8') as f:
            text = f.read()
        return load_rules(text.splitlines()), text
    raise ToolkitError(
        f'head rules {spec!r}: not a file and not one of '
        "leftmost, rightmost, toy, collins-english")


def _load_trees(text, fmt, rules, path):
    if fmt == 'bracketed':
        raw = read_bracketed(text, path)
    elif fmt == 'export':
        raw = read_export(text, path)
    elif fmt == 'json':
        return read_json_corpus(text, path)
    else:
        raise ToolkitError(f'cannot read constituent trees from {fmt!r} input')
    return [lexicalize(t, rules) for t in raw]


def _write_trees(trees, fmt, path):
    if fmt == 'bracketed':
        return write_bracketed(trees, path)
    if fmt == 'export':
        return write_export(trees)
    if fmt == 'json':
        return write_json_corpus(trees)
    raise ToolkitError(f'cannot write constituent trees as {fmt!r}')


def _split_csv(arg):
    return frozenset(s for s in (arg or '').split(',') if s)


def _pmap(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        from multiprocessing import get_context
        with get_context('fork').Pool(jobs) as pool:
            return pool.map(fn, items)
    return [fn(item) for item in items]


# --- conversion -------------------------------------------------------------

def _encode_tree(tree, scheme, strip):
    if scheme == 'hn':
        return encode_hn(tree)
    if strip:
        tree = strip_unaries(tree)
    dtree = ctree_to_dtree(tree)
    if scheme == 'delta':
        return encode_delta(dtree)
    return encode_direct(dtree)


def _encode_corpus(trees, scheme, strip, jobs):
    worker = functools.partial(_encode_tree, scheme=scheme, strip=strip)
    try:
        return _pmap(worker, trees, jobs)
    except ToolkitError:
        # rerun serially so the failing sentence can be named
        out = []
        for i, tree in enumerate(trees, 1):
            try:
                out.append(worker(tree))
            except ToolkitError as exc:
                raise ToolkitError(f'sentence {i}: {exc}') from None
        return out


def cmd_convert(args):
    rules, _ = _resolve_rules(args.head_rules)
    text = _read_input(args.input)
    fmt = args.format or _sniff_format(text)
    trees = _load_trees(text, fmt, rules, args.input)
    corpus = _encode_corpus(trees, args.encoding, strip=False, jobs=args.jobs)
    _write_output(args.output, write_conll(corpus))
    alphabet = label_alphabet(corpus)
    arcs = sum(count for _, count in alphabet)
    print(f'# {len(trees)} sentences, {arcs} arcs, '
          f'{len(alphabet)} distinct labels ({args.encoding})',
          file=sys.stderr)
    return 0


# --- training ---------------------------------------------------------------

def _rules_sha(text):
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def cmd_train(args):
    if args.encoding == 'delta' and args.mode == 'discontinuous':
        raise ToolkitError('the delta encoding requires continuous mode')
    rules, rules_text = _resolve_rules(args.head_rules)
    text = _read_input(args.input)
    fmt = args.format or _sniff_format(text)
    trees = _load_trees(text, fmt, rules, args.input)
    if not trees:
        raise ToolkitError('training input holds no trees')
    # direct/delta train on unaryless skeletons (the restorer puts the
    # chains back at parse time); hn keeps them inside the spine labels
    corpus = _encode_corpus(trees, args.encoding,
                            strip=args.encoding != 'hn', jobs=1)
    projective = args.mode == 'continuous'
    parser_model = train_unlabeled(corpus, args.epochs, seed=args.seed,
                                   projective=projective)
    labeler_model = train_labeler(corpus, args.epochs, seed=args.seed)
    unary_model = None
    if not args.no_unaries:
        data = extract_instances(trees)
        unary_model = train_unary(data, args.epochs, seed=args.seed)

    os.makedirs(args.model, exist_ok=True)
    parser_model.save(os.path.join(args.model, 'parser.json'))
    labeler_model.save(os.path.join(args.model, 'labeler.json'))
    if unary_model is not None:
        unary_model.save(os.path.join(args.model, 'unary.json'))
    manifest = {
        'bundle': 1,
        'encoding': args.encoding,
        'mode': args.mode,
        'epochs': args.epochs,
        'seed': args.seed,
        'unaries': unary_model is not None,
        'head_rules': args.head_rules,
        'head_rules_sha256': _rules_sha(rules_text),
    }
    with open(os.path.join(args.model, 'manifest.json'), 'w',
              encoding='utf-8', newline='\n') as f:
        f.write(json.dumps(manifest, sort_keys=True, indent=2) + '\n')
    with open(os.path.join(args.model, 'rules.txt'), 'w',
              encoding='utf-8', newline='\n') as f:
        f.write(rules_text if rules_text.endswith('\n')
                else rules_text + '\n')
    print(f'# trained on {len(trees)} trees; bundle at {args.model}',
          file=sys.stderr)
    return 0


# --- parsing ----------------------------------------------------------------

def _load_bundle(bundle_dir, want_unaries):
    manifest_path = os.path.join(bundle_dir, 'manifest.json')
    try:
        with open(manifest_path, encoding='utf-8') as f:
            manifest = json.load(f)
    except FileNotFoundError:
        raise ModelFormatError(f'{bundle_dir}: not a model bundle '
                               '(no manifest.json)') from None
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f'{manifest_path}: {exc}') from None
    if manifest.get('bundle') != 1:
        raise ModelFormatError(f'{manifest_path}: unsupported bundle format')
    if manifest.get('encoding') not in ENCODINGS:
        raise ModelFormatError(f'{manifest_path}: unknown encoding '
                               f'{manifest.get("encoding")!r}')
    if manifest.get('mode') not in MODES:
        raise ModelFormatError(f'{manifest_path}: unknown mode '
                               f'{manifest.get("mode")!r}')
    parser_model = LinearModel.load(os.path.join(bundle_dir, 'parser.json'))
    labeler_model = LinearModel.load(os.path.join(bundle_dir, 'labeler.json'))
    if parser_model.meta.get('task') != 'arcs':
        raise ModelFormatError('parser.json: not an arc scorer')
    if labeler_model.meta.get('task') != 'labels':
        raise ModelFormatError('labeler.json: not a label scorer')
    unary_model = None
    if want_unaries and manifest.get('unaries'):
        unary_model = LinearModel.load(os.path.join(bundle_dir, 'unary.json'))
        if unary_model.meta.get('task') != 'unary':
            raise ModelFormatError('unary.json: not a unary restorer')
    return manifest, parser_model, labeler_model, unary_model


def _read_sentences(text):
    first = None
    for line in text.split('\n'):
        if line.strip():
            first = line
            break
    if first is None:
        raise ToolkitError('empty input')
    sentences = []
    if '\t' in first:
        block = []
        for line in text.split('\n') + ['']:
            if line.strip():
                block.append(line)
                continue
            if not block:
                continue
            tokens = []
            for row in block:
                cols = row.split('\t')
                if len(cols) < 6:
                    raise ToolkitError(
                        f'token row needs at least 6 columns: {row!r}')
                pos = cols[4] if cols[4] != '_' else cols[3]
                tokens.append(Token(
                    len(tokens) + 1, cols[1], pos,
                    cols[2] if cols[2] != '_' else None,
                    cols[5] if cols[5] != '_' else None))
            sentences.append(Sentence(tuple(tokens)))
            block = []
    else:
        for line in text.split('\n'):
            if not line.strip():
                continue
            tokens = []
            for item in line.split():
                if '/' not in item:
                    raise ToolkitError(
                        f'expected form/POS tokens, got {item!r}')
                form, pos = item.rsplit('/', 1)
                tokens.append(Token(len(tokens) + 1, form, pos))
            sentences.append(Sentence(tuple(tokens)))
    return sentences


def _parse_one(sentence, parser_model, labeler_model, unary_model,
               scheme, continuous):
    heads = parse_heads(parser_model, sentence)
    enc = label_tree(sentence, heads, labeler_model)
    result = decode(enc, scheme)
    skeleton = DTree(sentence, tuple(enc.heads), result.pairs)
    hodt, repairs = recover_order(skeleton, continuous_mode=continuous)
    tree = dtree_to_ctree(hodt)
    if unary_model is not None:
        tree = recover(tree, unary_model)
    problems = validate(tree)
    if problems:
        raise ToolkitError(f'produced an invalid tree: {problems[0]}')
    return tree, result.warnings, repairs


def cmd_parse(args):
    manifest, parser_model, labeler_model, unary_model = _load_bundle(
        args.model, want_unaries=not args.no_unaries)
    continuous = manifest['mode'] == 'continuous'
    sentences = _read_sentences(_read_input(args.input))
    worker = functools.partial(
        _parse_one, parser_model=parser_model, labeler_model=labeler_model,
        unary_model=unary_model, scheme=manifest['encoding'],
        continuous=continuous)
    results = _pmap(worker, sentences, args.jobs)
    trees = [tree for tree, _, _ in results]
    fmt = args.format or ('bracketed' if continuous else 'export')
    _write_output(args.output, _write_trees(trees, fmt, args.output))
    warnings = sum(w for _, w, _ in results)
    repaired = sum(1 for _, _, r in results if r.total())
    touched = sum(r.tokens_changed for _, _, r in results)
    print(f'# parsed {len(trees)} sentences; {warnings} label fallbacks, '
          f'{repaired} sentences repaired ({touched} tokens)',
          file=sys.stderr)
    return 0


# --- evaluation -------------------------------------------------------------

def cmd_eval(args):
    gold_text = _read_input(args.gold)
    pred_text = _read_input(args.pred)
    fmt = args.format or _sniff_format(gold_text)
    punct = _split_csv(args.punct_pos)
    if fmt == 'conll':
        gold = read_conll(gold_text, args.gold)
        pred = read_conll(pred_text, args.pred)
        uas, las = attachment_scores(gold, pred, punct)
        report = {'kind': 'attachment', 'sentences': len(gold),
                  'uas': uas, 'las': las}
        print(f'# UAS {uas:.4f}  LAS {las:.4f} '
              f'over {len(gold)} sentences', file=sys.stderr)
    else:
        rules = LEFTMOST  # head choice is irrelevant to bracket scoring
        gold = _load_trees(gold_text, fmt, rules, args.gold)
        pred = _load_trees(pred_text, fmt, rules, args.pred)
        cfg = EvalConfig(punctuation_pos=punct,
                         ignore_root_labels=_split_csv(args.ignore_root))
        scores = evalb(gold, pred, cfg)
        report = {'kind': 'brackets'}
        report.update(scores.to_dict())
        print(f'# P {scores.precision:.4f}  R {scores.recall:.4f}  '
              f'F1 {scores.f1:.4f}  EX {scores.exact:.4f} '
              f'over {len(gold)} sentences', file=sys.stderr)
    _write_output(args.output, json.dumps(report, sort_keys=True) + '\n')
    return 0


# --- auditing ---------------------------------------------------------------

def cmd_check(args):
    rules, _ = _resolve_rules(args.head_rules)
    text = _read_input(args.input)
    fmt = args.format or _sniff_format(text)
    trees = _load_trees(text, fmt, rules, args.input)
    summary = {
        'trees': len(trees), 'roundtrip_failures': 0,
        'equivalence_failures': 0, 'continuous': 0, 'projective': 0,
        'nested': 0, 'binary': 0, 'strictly_ordered': 0,
    }
    bad = []
    for i, tree in enumerate(trees, 1):
        report = roundtrip_check(strip_unaries(tree))
        summary['continuous'] += report.continuous
        summary['projective'] += report.projective
        summary['nested'] += report.nested
        summary['binary'] += report.binary_input
        summary['strictly_ordered'] += report.strictly_ordered
        if not report.roundtrip_equal:
            summary['roundtrip_failures'] += 1
            bad.append(i)
        if not report.equivalence_ok:
            summary['equivalence_failures'] += 1
            if i not in bad:
                bad.append(i)
    _write_output(args.output, json.dumps(summary, sort_keys=True) + '\n')
    if bad:
        shown = ', '.join(str(i) for i in bad[:10])
        print(f'# violations in sentences: {shown}'
              + (' ...' if len(bad) > 10 else ''), file=sys.stderr)
        return 2
    print(f'# {len(trees)} trees checked, no violations', file=sys.stderr)
    return 0


# --- generation -------------------------------------------------------------

def cmd_gen(args):
    if args.kind == 'toy':
        trees = gen_toy_treebank(GenConfig(seed=args.seed), args.n)
    else:
        cfg = GenConfig(seed=args.seed,
                        discontinuity_probability=args.disc_prob,
                        unary_probability=args.unary_prob,
                        binary_only=args.binary)
        trees = [gen_ctree(cfg, args.length, index=i) for i in range(args.n)]
    fmt = args.format or ('export' if args.disc_prob > 0 else 'bracketed')
    _write_output(args.output, _write_trees(trees, fmt, args.output))
    return 0


# --- argument wiring --------------------------------------------------------

def _add_io(sub, output_default='-'):
    sub.add_argument('-i', '--input', default='-',
                     help="input path, '-' for stdin")
    sub.add_argument('-o', '--output', default=output_default,
                     help="output path, '-' for stdout")


def build_parser():
    top = argparse.ArgumentParser(
        prog='hodt',
        description='constituent parsing through head-ordered '
                    'dependency conversion')
    sub = top.add_subparsers(dest='command', required=True)

    p = sub.add_parser('convert', help='encode a c-treebank as dependencies')
    _add_io(p)
    p.add_argument('--format', choices=('bracketed', 'export', 'json'))
    p.add_argument('--encoding', choices=ENCODINGS, default='direct')
    p.add_argument('--head-rules', default='leftmost')
    p.add_argument('--jobs', type=int, default=1)
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser('train', help='fit the parsing pipeline')
    p.add_argument('-i', '--input', default='-')
    p.add_argument('-m', '--model', required=True,
                   help='bundle directory to write')
    p.add_argument('--format', choices=('bracketed', 'export', 'json'))
    p.add_argument('--encoding', choices=ENCODINGS, default='direct')
    p.add_argument('--mode', choices=MODES, default='continuous')
    p.add_argument('--head-rules', default='leftmost')
    p.add_argument('--seed', type=int, default=1)
    p.add_argument('--epochs', type=int, default=5)
    p.add_argument('--no-unaries', action='store_true')
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser('parse', help='parse tagged text or CoNLL tokens')
    _add_io(p)
    p.add_argument('-m', '--model', required=True, help='bundle directory')
    p.add_argument('--format', choices=('bracketed', 'export', 'json'),
                   help='output tree format (default by mode)')
    p.add_argument('--no-unaries', action='store_true')
    p.add_argument('--jobs', type=int, default=1)
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser('eval', help='score predictions against gold')
    p.add_argument('gold')
    p.add_argument('pred')
    p.add_argument('-o', '--output', default='-')
    p.add_argument('--format',
                   choices=('bracketed', 'export', 'json', 'conll'))
    p.add_argument('--punct-pos', default='',
                   help='comma-separated POS tags to ignore')
    p.add_argument('--ignore-root', default='',
                   help='comma-separated root labels to skip')
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser('check', help='roundtrip audit, exit 2 on violations')
    _add_io(p)
    p.add_argument('--format', choices=('bracketed', 'export', 'json'))
    p.add_argument('--head-rules', default='leftmost')
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser('gen', help='generate a synthetic treebank')
    _add_io(p)
    p.add_argument('--kind', choices=('toy', 'random'), default='toy')
    p.add_argument('-n', type=int, default=100)
    p.add_argument('--seed', type=int, default=1)
    p.add_argument('--length', type=int, default=8,
                   help='sentence length for random trees')
    p.add_argument('--disc-prob', type=float, default=0.0)
    p.add_argument('--unary-prob', type=float, default=0.0)
    p.add_argument('--binary', action='store_true')
    p.add_argument('--format', choices=('bracketed', 'export', 'json'))
    p.set_defaults(fn=cmd_gen)
    return top


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ToolkitError, TreebankFormatError, ModelFormatError,
            OSError) as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
