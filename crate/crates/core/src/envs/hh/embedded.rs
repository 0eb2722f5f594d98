// Generated by tools/gen_hh_fixtures.py.

pub(super) const FIXTURES: &[(&str, &str, &str)] = &[
    ("simple", "cleaning_out_drawers_0", include_str!("../../../fixtures/hh/simple/cleaning_out_drawers_0.pddl")),
    ("simple", "cleaning_out_drawers_1", include_str!("../../../fixtures/hh/simple/cleaning_out_drawers_1.pddl")),
    ("simple", "cleaning_out_drawers_2", include_str!("../../../fixtures/hh/simple/cleaning_out_drawers_2.pddl")),
    ("simple", "cleaning_out_drawers_3", include_str!("../../../fixtures/hh/simple/cleaning_out_drawers_3.pddl")),
    ("simple", "cleaning_out_drawers_4", include_str!("../../../fixtures/hh/simple/cleaning_out_drawers_4.pddl")),
    ("simple", "locking_every_door_0", include_str!("../../../fixtures/hh/simple/locking_every_door_0.pddl")),
    ("simple", "locking_every_door_1", include_str!("../../../fixtures/hh/simple/locking_every_door_1.pddl")),
    ("simple", "locking_every_door_2", include_str!("../../../fixtures/hh/simple/locking_every_door_2.pddl")),
    ("simple", "locking_every_door_3", include_str!("../../../fixtures/hh/simple/locking_every_door_3.pddl")),
    ("simple", "locking_every_door_4", include_str!("../../../fixtures/hh/simple/locking_every_door_4.pddl")),
    ("simple", "locking_every_window_0", include_str!("../../../fixtures/hh/simple/locking_every_window_0.pddl")),
    ("simple", "locking_every_window_1", include_str!("../../../fixtures/hh/simple/locking_every_window_1.pddl")),
    ("simple", "locking_every_window_2", include_str!("../../../fixtures/hh/simple/locking_every_window_2.pddl")),
    ("simple", "locking_every_window_3", include_str!("../../../fixtures/hh/simple/locking_every_window_3.pddl")),
    ("simple", "locking_every_window_4", include_str!("../../../fixtures/hh/simple/locking_every_window_4.pddl")),
    ("simple", "packing_food_for_work_0", include_str!("../../../fixtures/hh/simple/packing_food_for_work_0.pddl")),
    ("simple", "packing_food_for_work_1", include_str!("../../../fixtures/hh/simple/packing_food_for_work_1.pddl")),
    ("simple", "packing_food_for_work_2", include_str!("../../../fixtures/hh/simple/packing_food_for_work_2.pddl")),
    ("simple", "packing_food_for_work_3", include_str!("../../../fixtures/hh/simple/packing_food_for_work_3.pddl")),
    ("simple", "packing_food_for_work_4", include_str!("../../../fixtures/hh/simple/packing_food_for_work_4.pddl")),
    ("simple", "sorting_books_0", include_str!("../../../fixtures/hh/simple/sorting_books_0.pddl")),
    ("simple", "sorting_books_1", include_str!("../../../fixtures/hh/simple/sorting_books_1.pddl")),
    ("simple", "sorting_books_2", include_str!("../../../fixtures/hh/simple/sorting_books_2.pddl")),
    ("simple", "sorting_books_3", include_str!("../../../fixtures/hh/simple/sorting_books_3.pddl")),
    ("simple", "sorting_books_4", include_str!("../../../fixtures/hh/simple/sorting_books_4.pddl")),
    ("medium", "cleaning_out_drawers_0", include_str!("../../../fixtures/hh/medium/cleaning_out_drawers_0.pddl")),
    ("medium", "cleaning_out_drawers_1", include_str!("../../../fixtures/hh/medium/cleaning_out_drawers_1.pddl")),
    ("medium", "collect_misplaced_items_0", include_str!("../../../fixtures/hh/medium/collect_misplaced_items_0.pddl")),
    ("medium", "collect_misplaced_items_1", include_str!("../../../fixtures/hh/medium/collect_misplaced_items_1.pddl")),
    ("medium", "collect_misplaced_items_2", include_str!("../../../fixtures/hh/medium/collect_misplaced_items_2.pddl")),
    ("medium", "collect_misplaced_items_3", include_str!("../../../fixtures/hh/medium/collect_misplaced_items_3.pddl")),
    ("medium", "packing_food_for_work_0", include_str!("../../../fixtures/hh/medium/packing_food_for_work_0.pddl")),
    ("medium", "packing_food_for_work_1", include_str!("../../../fixtures/hh/medium/packing_food_for_work_1.pddl")),
    ("medium", "packing_food_for_work_2", include_str!("../../../fixtures/hh/medium/packing_food_for_work_2.pddl")),
    ("medium", "packing_food_for_work_3", include_str!("../../../fixtures/hh/medium/packing_food_for_work_3.pddl")),
    ("medium", "putting_away_toys_0", include_str!("../../../fixtures/hh/medium/putting_away_toys_0.pddl")),
    ("medium", "putting_away_toys_1", include_str!("../../../fixtures/hh/medium/putting_away_toys_1.pddl")),
    ("medium", "putting_away_toys_2", include_str!("../../../fixtures/hh/medium/putting_away_toys_2.pddl")),
    ("medium", "putting_away_toys_3", include_str!("../../../fixtures/hh/medium/putting_away_toys_3.pddl")),
    ("medium", "putting_away_toys_4", include_str!("../../../fixtures/hh/medium/putting_away_toys_4.pddl")),
    ("medium", "sorting_books_0", include_str!("../../../fixtures/hh/medium/sorting_books_0.pddl")),
    ("medium", "sorting_books_1", include_str!("../../../fixtures/hh/medium/sorting_books_1.pddl")),
    ("medium", "sorting_books_2", include_str!("../../../fixtures/hh/medium/sorting_books_2.pddl")),
    ("medium", "sorting_books_3", include_str!("../../../fixtures/hh/medium/sorting_books_3.pddl")),
    ("medium", "sorting_groceries_0", include_str!("../../../fixtures/hh/medium/sorting_groceries_0.pddl")),
    ("medium", "sorting_groceries_1", include_str!("../../../fixtures/hh/medium/sorting_groceries_1.pddl")),
    ("medium", "sorting_groceries_2", include_str!("../../../fixtures/hh/medium/sorting_groceries_2.pddl")),
    ("medium", "sorting_groceries_3", include_str!("../../../fixtures/hh/medium/sorting_groceries_3.pddl")),
    ("medium", "sorting_groceries_4", include_str!("../../../fixtures/hh/medium/sorting_groceries_4.pddl")),
    ("medium", "sorting_groceries_5", include_str!("../../../fixtures/hh/medium/sorting_groceries_5.pddl")),
    ("hard", "cleaning_out_drawers_0", include_str!("../../../fixtures/hh/hard/cleaning_out_drawers_0.pddl")),
    ("hard", "cleaning_out_drawers_1", include_str!("../../../fixtures/hh/hard/cleaning_out_drawers_1.pddl")),
    ("hard", "cleaning_out_drawers_2", include_str!("../../../fixtures/hh/hard/cleaning_out_drawers_2.pddl")),
    ("hard", "cleaning_out_drawers_3", include_str!("../../../fixtures/hh/hard/cleaning_out_drawers_3.pddl")),
    ("hard", "cleaning_out_drawers_4", include_str!("../../../fixtures/hh/hard/cleaning_out_drawers_4.pddl")),
    (
        "hard",
        "organizing_boxes_in_garage_0",
        include_str!("../../../fixtures/hh/hard/organizing_boxes_in_garage_0.pddl"),
    ),
    (
        "hard",
        "organizing_boxes_in_garage_1",
        include_str!("../../../fixtures/hh/hard/organizing_boxes_in_garage_1.pddl"),
    ),
    (
        "hard",
        "organizing_boxes_in_garage_2",
        include_str!("../../../fixtures/hh/hard/organizing_boxes_in_garage_2.pddl"),
    ),
    (
        "hard",
        "organizing_boxes_in_garage_3",
        include_str!("../../../fixtures/hh/hard/organizing_boxes_in_garage_3.pddl"),
    ),
    (
        "hard",
        "organizing_boxes_in_garage_4",
        include_str!("../../../fixtures/hh/hard/organizing_boxes_in_garage_4.pddl"),
    ),
    ("hard", "organizing_file_cabinet_0", include_str!("../../../fixtures/hh/hard/organizing_file_cabinet_0.pddl")),
    ("hard", "organizing_file_cabinet_1", include_str!("../../../fixtures/hh/hard/organizing_file_cabinet_1.pddl")),
    ("hard", "organizing_file_cabinet_2", include_str!("../../../fixtures/hh/hard/organizing_file_cabinet_2.pddl")),
    ("hard", "organizing_file_cabinet_3", include_str!("../../../fixtures/hh/hard/organizing_file_cabinet_3.pddl")),
    ("hard", "putting_away_toys_0", include_str!("../../../fixtures/hh/hard/putting_away_toys_0.pddl")),
    ("hard", "putting_away_toys_1", include_str!("../../../fixtures/hh/hard/putting_away_toys_1.pddl")),
    ("hard", "putting_away_toys_2", include_str!("../../../fixtures/hh/hard/putting_away_toys_2.pddl")),
    ("hard", "putting_away_toys_3", include_str!("../../../fixtures/hh/hard/putting_away_toys_3.pddl")),
    ("hard", "sorting_groceries_0", include_str!("../../../fixtures/hh/hard/sorting_groceries_0.pddl")),
    ("hard", "sorting_groceries_1", include_str!("../../../fixtures/hh/hard/sorting_groceries_1.pddl")),
    ("hard", "sorting_groceries_2", include_str!("../../../fixtures/hh/hard/sorting_groceries_2.pddl")),
    ("hard", "sorting_groceries_3", include_str!("../../../fixtures/hh/hard/sorting_groceries_3.pddl")),
    ("hard", "sorting_groceries_4", include_str!("../../../fixtures/hh/hard/sorting_groceries_4.pddl")),
    ("hard", "sorting_groceries_5", include_str!("../../../fixtures/hh/hard/sorting_groceries_5.pddl")),
    ("hard", "sorting_groceries_6", include_str!("../../../fixtures/hh/hard/sorting_groceries_6.pddl")),
];
