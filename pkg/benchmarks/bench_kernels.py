"""Compare the compiled decoding kernels against the pure-Python fallback.

Run:  python3 benchmarks/bench_kernels.py [--sizes 10,20,40] [--repeats 5]

Prints per-kernel wall times for both backends and verifies that they
return identical results on every input they are timed on.
"""

import argparse
import time

import numpy as np

from hodt import _pykern

try:
    from hodt import _ckern
except ImportError:
    _ckern = None


def _time(fn, args, repeats):
    best = float('inf')
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(sizes, repeats, seed=1):
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        sc = rng.normal(size=(n + 1, n + 1))
        emis = rng.normal(size=(n, 12))
        trans = rng.normal(size=(n, 12, 12))
        cases = [
            ('eisner', _pykern.eisner_decode,
             None if _ckern is None else _ckern.eisner_decode, (sc,)),
            ('cle', _pykern.cle_decode,
             None if _ckern is None else _ckern.cle_decode, (sc,)),
            ('viterbi', _pykern.viterbi_chain,
             None if _ckern is None else _ckern.viterbi_chain, (emis, trans)),
        ]
        for name, pure, compiled, args in cases:
            t_pure, out_pure = _time(pure, args, repeats)
            if compiled is None:
                rows.append((name, n, t_pure, None, None))
                continue
            t_comp, out_comp = _time(compiled, args, repeats)
            if out_pure != out_comp:
                raise SystemExit(
                    f'{name} n={n}: backends disagree: '
                    f'{out_pure!r} vs {out_comp!r}')
            rows.append((name, n, t_pure, t_comp, t_pure / t_comp))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument('--sizes', default='10,20,40,80')
    ap.add_argument('--repeats', type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(',')]
    if _ckern is None:
        print('compiled backend unavailable; timing pure python only')
    rows = bench(sizes, args.repeats)
    print(f'{"kernel":<8} {"n":>4} {"pure (ms)":>10} '
          f'{"compiled (ms)":>14} {"speedup":>8}')
    for name, n, tp, tc, speedup in rows:
        comp = f'{tc * 1e3:14.3f}' if tc is not None else f'{"-":>14}'
        sp = f'{speedup:8.1f}x' if speedup is not None else f'{"-":>9}'
        print(f'{name:<8} {n:>4} {tp * 1e3:10.3f} {comp} {sp}')
    print('results identical across backends')


if __name__ == '__main__':
    main()
