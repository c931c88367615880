"""Compare the compiled and pure-Python kernels.

Each backend runs in its own interpreter (the backend is fixed at import),
and the median of several repeats is reported:

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, random, sys, timeit
import growthcertify as g
from growthcertify import _kernel
from growthcertify.extension import ExtensionGroup, GeneratingSet, make_automorphism
from growthcertify.words import parse_word

repeat = int(sys.argv[1])
rng = random.Random(0)
words = [tuple(rng.choice([1, -1, 2, -2]) for _ in range(400)) for _ in range(200)]
images = (tuple(_kernel.free_reduce(words[0][:30])), tuple(_kernel.free_reduce(words[1][:30])))
inverse = tuple(_kernel.invert_letters(w) for w in images)
reduced = [_kernel.free_reduce(w) for w in words]

E = ExtensionGroup(2, [make_automorphism([parse_word("b", 2), parse_word("ab", 2)],
                                         [parse_word("bA", 2), parse_word("a", 2)])])
T = GeneratingSet([("t", E.element("", (1,))), ("x", E.element("a", (0,)))])
S = GeneratingSet([("u", E.element("bA")), ("v", E.element("a"))])

cases = {
    "free_reduce 200 x 400 letters": lambda: [_kernel.free_reduce(w) for w in words],
    "substitute 200 words": lambda: [_kernel.substitute(w, images, inverse) for w in reduced],
    "ball radius 9, Fibonacci T": lambda: g.enumerate_ball(E, T, 9),
    "ball radius 8, free basis": lambda: g.enumerate_ball(E, S, 8),
    "two_free_certify Fibonacci": lambda: g.two_free_certify(E, T),
}
out = {"backend": g.BACKEND}
for name, fn in cases.items():
    times = timeit.repeat(fn, number=1, repeat=repeat)
    out[name] = sorted(times)[len(times) // 2]
print(json.dumps(out))
"""


def measure(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("GROWTHCERTIFY_PURE_PYTHON", None)
    if pure:
        env["GROWTHCERTIFY_PURE_PYTHON"] = "1"
    proc = subprocess.run(
        [sys.executable, "-c", WORKLOAD, str(repeat)], capture_output=True, text=True, env=env, check=True
    )
    return json.loads(proc.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    compiled = measure(False, args.repeat)
    pure = measure(True, args.repeat)
    if compiled["backend"] != "cython":
        print("compiled kernel not available; build it with `pip install -e . --no-build-isolation`")
    print(f"{'workload':34} {'python (s)':>11} {compiled['backend'] + ' (s)':>11} {'speedup':>8}")
    for name in pure:
        if name == "backend":
            continue
        p, c = pure[name], compiled[name]
        print(f"{name:34} {p:11.4f} {c:11.4f} {p / c:7.1f}x")


if __name__ == "__main__":
    main()
