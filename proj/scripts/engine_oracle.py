"""Independent reference values for the monthly thermal balance.

Re-derives the fixture option loads at the deterministic point straight from
the balance formulas and writes tests/data/engine_oracle.json.
"""

import csv
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[1]
FIXTURE = ROOT / "fixtures" / "chicago_office"

LENGTH, WIDTH, STORIES, STORY_H = 93.0, 54.0, 5, 4.0
LOADS = dict(equip=10.765, light=10.55, people=0.07, inf=0.0003, vent_area=0.0006,
             vent_person=0.005, op=0.45, sched=1.0)
OPTIONS = {
    1: dict(wall=3.7, floor=4.59, roof=5.88, u=1.7, shgc=0.20,
            wwr=dict(N=0.70, S=0.65, E=0.60, W=0.20)),
    2: dict(wall=2.76, floor=4.59, roof=4.17, u=3.12, shgc=0.42,
            wwr=dict(N=0.40, S=0.40, E=0.40, W=0.40)),
    3: dict(wall=3.35, floor=4.59, roof=5.88, u=1.2, shgc=0.20,
            wwr=dict(N=0.50, S=0.70, E=0.40, W=0.45)),
    4: dict(wall=3.35, floor=3.35, roof=5.88, u=1.2, shgc=0.15,
            wwr=dict(N=0.50, S=0.70, E=0.40, W=0.45)),
}
T_HEAT, T_COOL = 21.0, 23.0


def climate():
    with open(FIXTURE / "climate.csv", newline="") as f:
        return [
            dict(t=float(r["t_out_C"]), hours=float(r["hours"]),
                 irr={o: float(r[f"irr_{o}_W_m2"]) for o in "NSEW"})
            for r in csv.DictReader(f)
        ]


def option_load(opt):
    floor_area = LENGTH * WIDTH * STORIES
    facade = {o: (LENGTH if o in "NS" else WIDTH) * STORIES * STORY_H for o in "NSEW"}
    glz = {o: facade[o] * opt["wwr"][o] for o in "NSEW"}
    opq = {o: facade[o] - glz[o] for o in "NSEW"}
    h_tr = (sum(opq.values()) / opt["wall"] + LENGTH * WIDTH / opt["roof"]
            + 0.5 * LENGTH * WIDTH / opt["floor"] + opt["u"] * sum(glz.values()))
    q = (LOADS["inf"] * floor_area * LOADS["sched"] + LOADS["vent_area"] * floor_area
         + LOADS["vent_person"] * LOADS["people"] * floor_area)
    h_ve = 1200.0 * q
    h = h_tr + h_ve
    heat = cool = 0.0
    for m in climate():
        t = m["hours"]
        q_int = ((LOADS["equip"] + LOADS["light"] + 120.0 * LOADS["people"]) * floor_area
                 * LOADS["op"] * t / 1000.0)
        q_sol = sum(opt["shgc"] * glz[o] * m["irr"][o] * t / 1000.0 for o in "NSEW")
        g = q_int + q_sol
        l_h = max(0.0, h * (T_HEAT - m["t"]) * t / 1000.0)
        l_c = max(0.0, h * (T_COOL - m["t"]) * t / 1000.0)
        eta_g = l_h / (l_h + g) if l_h + g > 0 else 0.0
        eta_l = g / (g + l_c) if g + l_c > 0 else 0.0
        heat += max(0.0, l_h - eta_g * g)
        cool += max(0.0, g - eta_l * l_c)
    return dict(h_tr_W_K=h_tr, h_ve_W_K=h_ve, annual_heating_kWh=heat,
                annual_cooling_kWh=cool, annual_load_kWh_m2=(heat + cool) / floor_area)


def main():
    out = {str(k): option_load(v) for k, v in OPTIONS.items()}
    path = ROOT / "tests" / "data" / "engine_oracle.json"
    path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    for k, v in out.items():
        print(k, "%.6g" % v["annual_load_kWh_m2"], "H_tr %.6g" % v["h_tr_W_K"])


if __name__ == "__main__":
    main()
