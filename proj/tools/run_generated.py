# Copyright (C) 2026 The nnmig Authors
# SPDX-License-Identifier: Apache-2.0

"""Imports generated files, builds each model and runs one forward pass.

usage: python3 tools/run_generated.py FILE_OR_DIR...
"""

import glob
import importlib.util
import os
import re
import sys

os.environ.setdefault("TF_CPP_MIN_LOG_LEVEL", "3")


def model_of(mod, src):
    builders = [n for n in dir(mod) if n.startswith("build_")]
    if builders:
        return getattr(mod, builders[0])()
    cls = re.findall(r"^class (\w+)\((?:nn\.Module|keras\.Model)\)", src, re.M)[-1]
    return getattr(mod, cls)()


def run(path):
    src = open(path).read()
    spec = importlib.util.spec_from_file_location("generated", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    model = model_of(mod, src)
    shape = (2,) + tuple(mod.INPUT_SHAPE)
    tokens = "Embedding(" in src
    if "import torch" in src:
        import torch
        x = torch.randint(0, 10, shape) if tokens else torch.randn(shape)
        model.eval()
        with torch.no_grad():
            y = model(x)
    else:
        import numpy as np
        x = np.random.randint(0, 10, shape) if tokens else np.random.randn(*shape).astype("float32")
        y = model(x)
    return tuple(y.shape)


def main(args):
    paths = []
    for a in args:
        paths += sorted(glob.glob(os.path.join(a, "*.py"))) if os.path.isdir(a) else [a]
    failed = 0
    for p in paths:
        try:
            print("ok   %s -> %s" % (os.path.basename(p), run(p)))
        except Exception as e:  # report and keep going
            failed += 1
            print("FAIL %s: %s: %s" % (os.path.basename(p), type(e).__name__, e))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
