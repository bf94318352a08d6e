#!/usr/bin/env python3
"""Build the bundled two-class MNIST subset in IDX format.

Source: the `mnist` npm package (v1.1.0, MIT), which ships 10,000 MNIST
digits as JSON arrays of 784 floats in [0, 1] quantized from 8-bit values.

    npm pack mnist && tar xzf mnist-1.1.0.tgz
    python3 make_mnist_subset.py package/src/digits data/mnist79 --digits 7 9 --total 2000
"""
import argparse
import json
import random
import struct
from pathlib import Path


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("digits_dir", type=Path)
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("--digits", type=int, nargs="+", default=[7, 9])
    ap.add_argument("--total", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=20240417)
    args = ap.parse_args()

    pools = {}
    for d in args.digits:
        flat = json.loads((args.digits_dir / f"{d}.json").read_text())["data"]
        pools[d] = [flat[i:i + 784] for i in range(0, len(flat), 784)]

    # Balanced as far as the smaller class allows, remainder from the larger.
    per = args.total // len(args.digits)
    take = {d: min(per, len(p)) for d, p in pools.items()}
    short = args.total - sum(take.values())
    for d in sorted(pools, key=lambda d: -len(pools[d])):
        extra = min(short, len(pools[d]) - take[d])
        take[d] += extra
        short -= extra
    if short:
        raise SystemExit("not enough digits for the requested total")

    items = [(d, img) for d in args.digits for img in pools[d][:take[d]]]
    random.Random(args.seed).shuffle(items)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    with open(args.out_dir / "images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(items), 28, 28))
        for _, img in items:
            f.write(bytes(int(round(v * 255)) for v in img))
    with open(args.out_dir / "labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(items)))
        f.write(bytes(d for d, _ in items))
    print({d: take[d] for d in args.digits})


if __name__ == "__main__":
    main()
