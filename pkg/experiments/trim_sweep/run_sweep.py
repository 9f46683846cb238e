import os

import matplotlib

matplotlib.use("Agg")

from fastcore.xtras import save_pickle
from loguru import logger

from rotorsim.cli import CASES
from rotorsim.config import VehicleConfig
from rotorsim.plotting import plot_sweep
from rotorsim.trim import FlightCondition, trim_sweep
from rotorsim.utils import make_outdir, write_csv

SPEEDS = list(range(0, 170, 10))


def run_case(case: str, outdir: str):
    overrides, weight, altitude = CASES[case]
    config = VehicleConfig.from_file(overrides=overrides)
    template = FlightCondition(gross_weight=weight, altitude=altitude)
    sweep = trim_sweep(SPEEDS, template, config)

    write_csv(sweep, os.path.join(outdir, f"sweep_{case}.csv"))
    fig = plot_sweep(sweep)
    fig.savefig(os.path.join(outdir, f"sweep_{case}.pdf"), bbox_inches="tight")

    res = {
        "case": case,
        "gross_weight": weight,
        "altitude": altitude,
        "sweep": sweep,
        "failed": int(sweep["power_hp"].isna().sum()),
        "config": config.to_text(),
    }
    save_pickle(os.path.join(outdir, f"results_{case}.pkl"), res)
    return res


if __name__ == "__main__":
    outdir = make_outdir("trim_sweep")
    for case in CASES:
        try:
            res = run_case(case, outdir)
            logger.info(f"{case}: {len(SPEEDS) - res['failed']} of {len(SPEEDS)} points trimmed")
        except Exception as e:
            print(e)
