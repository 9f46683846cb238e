import os

import matplotlib

matplotlib.use("Agg")

from fastcore.xtras import save_pickle
from loguru import logger

from rotorsim.errors import MissionFailure
from rotorsim.mission import ScenarioConfig, simulate_ship_landing
from rotorsim.plotting import plot_relative_distance, plot_trajectory
from rotorsim.utils import make_outdir

VARIANTS = {
    "moving": [],
    "stationary": ["ship.speed_kts=0"],
}


def fly(name: str, overrides, outdir: str):
    scenario = ScenarioConfig.from_file(overrides=overrides)
    try:
        report = simulate_ship_landing(scenario)
        log, summary = report.log, report.summary()
    except MissionFailure as exc:
        log, summary = exc.log, {"failure": str(exc)}

    frame = log.to_frame()
    log.write(os.path.join(outdir, f"flight_log_{name}.csv"))
    if len(frame):
        plot_trajectory(frame).savefig(os.path.join(outdir, f"trajectory_{name}.pdf"), bbox_inches="tight")
        plot_relative_distance(frame).savefig(os.path.join(outdir, f"distance_{name}.pdf"), bbox_inches="tight")

    res = {
        **summary,
        "variant": name,
        "overrides": overrides,
        "phase_starts": dict(log.phase_starts),
        "saturated_steps": int(frame["saturated"].sum()) if len(frame) else 0,
    }
    save_pickle(os.path.join(outdir, f"results_{name}.pkl"), res)
    return res


if __name__ == "__main__":
    outdir = make_outdir("ship_landing")
    for name, overrides in VARIANTS.items():
        try:
            res = fly(name, overrides, outdir)
            logger.info(f"{name}: {res}")
        except Exception as e:
            print(e)
