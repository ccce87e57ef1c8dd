import json
import os
import sys

from tqdm import tqdm

import cli
from config.run import RunConfig


def run_main(json_ctx=None):
    """Run an experiment file: a JSON object with a `command` and RunConfig fields."""
    if not json_ctx and len(sys.argv) <= 1:
        tqdm.write("\nNo config file is specified.\n", file=sys.stderr)
        return 2
    elif json_ctx:
        ctx = json_ctx
    else:
        try:
            with open(sys.argv[1], "r") as fhandle:
                ctx = json.load(fhandle)
        except FileNotFoundError:
            tqdm.write("\nFile {} not found !\n".format(sys.argv[1]), file=sys.stderr)
            return 1

    try:
        config = RunConfig.from_dict(ctx)
    except (TypeError, ValueError) as exc:
        tqdm.write("\nInvalid experiment: {}\n".format(exc), file=sys.stderr)
        return 2
    for path in (config.out_path, config.truth_path, config.stats_path):
        if path and os.path.dirname(path):
            os.makedirs(os.path.dirname(path), exist_ok=True)
    if config.extra:
        tqdm.write("ignoring unknown keys: {}".format(", ".join(sorted(config.extra))), file=sys.stderr)
    return cli.run(config)


if __name__ == '__main__':
    sys.exit(run_main())
