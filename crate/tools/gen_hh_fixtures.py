#!/usr/bin/env python3
"""Writes the household problem fixtures under crates/core/fixtures/hh/<split>/.

Each family is a template over a few object roles; instances differ in object
names, which container holds what, and an optional distractor piece of
furniture. The optimal plan lengths are checked by the Rust test suite.
"""

import pathlib
import shutil

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "crates" / "core" / "fixtures" / "hh"
REFERENCE = ROOT / "crates" / "core" / "fixtures" / "reference" / "cleaning_out_drawers_0.pddl"

DISTRACTORS = ["chair_1", "stool_1", "armchair_1", "lamp_1", "rug_1", "ottoman_1", "bench_1"]


def problem(name, objects, init, goal):
    lines = [f"(define (problem {name})", "    (:domain igibson)", "", "    (:objects"]
    for obj, ty in objects:
        lines.append(f"        {obj} - {ty}")
    lines += ["    )", "", "    (:init"]
    for atom in init:
        lines.append(f"        {atom}")
    lines += ["    )", "", "    (:goal", "        (and"]
    for atom in goal:
        lines.append(f"            {atom}")
    lines += ["        )", "    )", ")", ""]
    return "\n".join(lines)


def distractor(i):
    """Odd instances get one extra piece of furniture."""
    return [(DISTRACTORS[i % len(DISTRACTORS)], "object")] if i % 2 == 1 else []


def closed(c):
    return f"(not (open {c}))"


def fetch_from_containers(name, i, item, n_items, holder, holder_ty, target, target_ty, relation, extra_loose=0):
    """`n_items` items, one per closed holder, plus `extra_loose` items lying on
    a surface, all moved `relation` the target."""
    items = [f"{item}_{k + 1}" for k in range(n_items + extra_loose)]
    holders = [f"{holder}_{k + 1}" for k in range(n_items)]
    objects = [(o, "movable") for o in items] + [(h, holder_ty) for h in holders] + [(target, target_ty)]
    init = []
    # Rotate which holder contains which item so instances differ.
    for k in range(n_items):
        init.append(f"(inside {items[k]} {holders[(k + i) % n_items]})")
    for h in holders:
        init.append(closed(h))
    if extra_loose:
        surface = "desk_1" if holder != "bag" else "counter_1"
        objects.append((surface, "object"))
        for it in items[n_items:]:
            init.append(f"(ontop {it} {surface})")
    if target_ty == "container":
        init.append(f"(open {target})")
    objects += distractor(i)
    goal = [f"({relation} {it} {target})" for it in items]
    return problem(name, objects, init, goal)


def cleaning_out_drawers(name, i, n):
    holder = "cabinet" if i % 2 == 0 else "drawer"
    return fetch_from_containers(name, i, "bowl", n, holder, "container", "sink_1", "object", "ontop")


def packing_food(name, i, n):
    food = ["sandwich", "apple", "snack"][i % 3]
    holder = "fridge" if n == 1 else "cabinet"
    return fetch_from_containers(name, i, food, n, holder, "container", "bag_1", "container", "inside")


def sorting_groceries(name, i, n, loose):
    item = ["milk", "cereal", "egg", "bread"][i % 4]
    if loose:
        # All closed-bag items share one bag.
        items = [f"{item}_{k + 1}" for k in range(n + loose)]
        objects = [(o, "movable") for o in items] + [("bag_1", "container"), ("fridge_1", "container"), ("counter_1", "object")]
        init = [f"(inside {it} bag_1)" for it in items[:n]] + [closed("bag_1"), "(open fridge_1)"]
        init += [f"(ontop {it} counter_1)" for it in items[n:]]
        objects += distractor(i)
        goal = [f"(inside {it} fridge_1)" for it in items]
        return problem(name, objects, init, goal)
    return fetch_from_containers(name, i, item, n, "bag", "container", "fridge_1", "container", "inside")


def move_loose(name, i, item, n, sources, target, target_ty, relation):
    items = [f"{item}_{k + 1}" for k in range(n)]
    objects = [(o, "movable") for o in items] + [(s, "object") for s in sources] + [(target, target_ty)]
    init = [f"(ontop {it} {sources[(k + i) % len(sources)]})" for k, it in enumerate(items)]
    if target_ty == "container":
        init.append(f"(open {target})")
    objects += distractor(i)
    goal = [f"({relation} {it} {target})" for it in items]
    return problem(name, objects, init, goal)


def locking(name, i, what, n):
    things = [f"{what}_{k + 1}" for k in range(n)]
    objects = [(t, "container") for t in things] + distractor(i)
    init = [f"(open {t})" for t in things]
    goal = [closed(t) for t in things]
    return problem(name, objects, init, goal)


def boxes_in_garage(name, i):
    boxes = ["box_1", "box_2"]
    shelf = ["shelf_1", "floor_1"][i % 2]
    objects = [(b, "movable") for b in boxes] + [("cabinet_1", "container"), (shelf, "object")] + distractor(i)
    init = [f"(ontop {b} {shelf})" for b in boxes] + [closed("cabinet_1")]
    goal = [f"(inside {b} cabinet_1)" for b in boxes] + [closed("cabinet_1")]
    return problem(name, objects, init, goal)


def file_cabinet(name, i):
    return fetch_from_containers(name, i, "folder", 2, "drawer", "container", "file_cabinet_1", "container", "inside", extra_loose=1)


SPLITS = {
    "simple": [
        ("cleaning_out_drawers", 5, lambda n, i: cleaning_out_drawers(n, i, 1)),
        ("locking_every_door", 5, lambda n, i: locking(n, i, "door", 2)),
        ("locking_every_window", 5, lambda n, i: locking(n, i, "window", 3)),
        ("packing_food_for_work", 5, lambda n, i: packing_food(n, i, 1)),
        ("sorting_books", 5, lambda n, i: move_loose(n, i, "book", 1, ["floor_1", "table_1"], "shelf_1", "object", "ontop")),
    ],
    "medium": [
        ("cleaning_out_drawers", 2, lambda n, i: cleaning_out_drawers(n, i, 2)),
        ("collect_misplaced_items", 4, lambda n, i: move_loose(n, i, ["sock", "gym_shoe", "notebook", "cup"][i], 2, ["sofa_1", "bed_1"], "table_1", "object", "ontop")),
        ("packing_food_for_work", 4, lambda n, i: packing_food(n, i, 2)),
        ("putting_away_toys", 5, lambda n, i: move_loose(n, i, "toy", 2, ["floor_1", "bed_1"], "toybox_1", "container", "inside")),
        ("sorting_books", 4, lambda n, i: move_loose(n, i, "book", 2, ["floor_1", "sofa_1"], "shelf_1", "object", "ontop")),
        ("sorting_groceries", 6, lambda n, i: sorting_groceries(n, i, 2, 0)),
    ],
    "hard": [
        ("cleaning_out_drawers", 5, lambda n, i: cleaning_out_drawers(n, i, 3)),
        ("organizing_boxes_in_garage", 5, boxes_in_garage),
        ("organizing_file_cabinet", 4, file_cabinet),
        ("putting_away_toys", 4, lambda n, i: move_loose(n, i, "toy", 3, ["floor_1", "bed_1", "sofa_1"], "toybox_1", "container", "inside")),
        ("sorting_groceries", 7, lambda n, i: sorting_groceries(n, i, 2, 1)),
    ],
}


INDEX = ROOT / "crates" / "core" / "src" / "envs" / "hh" / "embedded.rs"


def main():
    index = ["// Generated by tools/gen_hh_fixtures.py.", "", "pub(super) const FIXTURES: &[(&str, &str, &str)] = &["]
    for split, families in SPLITS.items():
        out = OUT / split
        out.mkdir(parents=True, exist_ok=True)
        for old in out.glob("*.pddl"):
            old.unlink()
        for family, count, make in families:
            for i in range(count):
                name = f"{family}_{i}"
                path = out / f"{name}.pddl"
                index.append(f'    ("{split}", "{name}", include_str!("../../../fixtures/hh/{split}/{name}.pddl")),')
                if split == "simple" and name == "cleaning_out_drawers_0":
                    shutil.copyfile(REFERENCE, path)
                    continue
                path.write_text(make(name, i))
    index += ["];", ""]
    INDEX.parent.mkdir(parents=True, exist_ok=True)
    INDEX.write_text("\n".join(index))


if __name__ == "__main__":
    main()
