import numpy as np
import pytest

from aquagauge.constants import FEATURE_NAMES
from aquagauge.errors import DataError
from aquagauge.forecast import build_features, build_supervised, feature_table, split_by_station
from aquagauge.ingest import parse_dataset
from aquagauge.wqi import compute_wqi
from conftest import csv_row, csv_text, synthetic_csv

COL = {name: i for i, name in enumerate(FEATURE_NAMES)}


def station_visits(*visits, station=1207):
    rows = []
    for serial, (month_year, do) in enumerate(visits):
        rows.append(csv_row(serial, station, month_year, do, 7.3, 158, 1.8, 7.2, 280))
    return rows


def test_one_step_pairs_one_example():
    ds = parse_dataset(csv_text(station_visits(("8-2019", 9.0), ("12-2019", 4.5))))
    task = build_supervised(ds)

    assert len(task) == 1
    assert task.keys == (("1207", 8, 2019),)
    assert task.targets[0] == compute_wqi(ds.samples[1]).wqi
    assert task.features.feature_names == FEATURE_NAMES


def test_single_observation_gives_nothing():
    ds = parse_dataset(csv_text(station_visits(("8-2019", 9.0))))
    assert len(build_supervised(ds)) == 0


def test_three_visits_fill_one_lag():
    ds = parse_dataset(csv_text(station_visits(("8-2019", 9.0), ("12-2019", 4.5), ("4-2020", 3.5))))
    task = build_supervised(ds)
    wqis = [compute_wqi(s).wqi for s in ds.samples]

    assert len(task) == 2
    first, second = task.features.values
    assert (first[COL["lag1_present"]], first[COL["lag1_wqi"]]) == (0.0, 0.0)
    assert (second[COL["lag1_present"]], second[COL["lag1_wqi"]]) == (1.0, wqis[0])
    assert second[COL["lag2_present"]] == 0.0
    assert task.targets.tolist() == [wqis[1], wqis[2]]


def test_second_lag_reaches_back_two_steps():
    visits = [("8-2019", 9.0), ("12-2019", 4.5), ("4-2020", 3.5), ("8-2020", 6.5)]
    ds = parse_dataset(csv_text(station_visits(*visits)))
    wqis = [compute_wqi(s).wqi for s in ds.samples]
    last = build_supervised(ds).features.values[-1]

    assert (last[COL["lag1_wqi"]], last[COL["lag2_wqi"]]) == (wqis[1], wqis[0])
    assert last[COL["lag2_present"]] == 1.0


@pytest.mark.parametrize("later,paired", [
    ("11-2019", True),
    ("1-2020", True),
    ("10-2019", False),
    ("2-2020", False),
])
def test_pairing_tolerance(later, paired):
    ds = parse_dataset(csv_text(station_visits(("8-2019", 9.0), (later, 4.5))))
    assert len(build_supervised(ds)) == (1 if paired else 0)


@pytest.mark.parametrize("visits,target_do", [
    ([("8-2019", 9.0), ("11-2019", 4.5), ("1-2020", 3.5)], 4.5),
    ([("8-2019", 9.0), ("12-2019", 4.5), ("1-2020", 3.5)], 4.5),
    ([("8-2019", 9.0), ("1-2020", 3.5), ("12-2019", 4.5)], 4.5),
])
def test_nearest_then_earlier_wins(visits, target_do):
    ds = parse_dataset(csv_text(station_visits(*visits)))
    expected = compute_wqi(next(s for s in ds.samples if s.dissolved_oxygen == target_do)).wqi

    task = build_supervised(ds)
    assert task.keys[0] == ("1207", 8, 2019)
    assert task.targets[0] == expected


def test_stations_never_mix():
    ds = parse_dataset(synthetic_csv(n_stations=8, n_visits=5, seed=3))
    by_station = {}
    for sample in ds.samples:
        by_station.setdefault(sample.station_code, {})[sample.month_index] = compute_wqi(sample).wqi

    task = build_supervised(ds)
    assert len(task) == 8 * 4
    for (station, month, year), target in zip(task.keys, task.targets):
        origin = year * 12 + month - 1
        later = [by_station[station][m] for m in range(origin + 3, origin + 6) if m in by_station[station]]
        assert target in later


def test_missing_temperature_is_flagged():
    rows = station_visits(("8-2019", 9.0), ("12-2019", 4.5))
    rows[0] = csv_row(0, 1207, "8-2019", 9.0, 7.3, 158, 1.8, 7.2, 280, temp="")
    row = build_supervised(parse_dataset(csv_text(rows))).features.values[0]

    assert (row[COL["temp"]], row[COL["temp_present"]]) == (0.0, 0.0)


def test_build_features_covers_every_observation(synthetic_station_csv):
    ds = parse_dataset(synthetic_station_csv)
    features, keys, wqis = build_features(ds)

    assert features.n_rows == len(keys) == len(wqis) == len(ds)
    assert wqis.tolist() == [compute_wqi(s).wqi for s in ds.samples]
    assert feature_table(ds)["target"].isna().sum() == 12


def test_split_by_station(synthetic_station_csv):
    task = build_supervised(parse_dataset(synthetic_station_csv))
    train, test = split_by_station(task, 0.2, seed=0)

    train_stations = {key[0] for key in train.keys}
    test_stations = {key[0] for key in test.keys}
    assert not train_stations & test_stations
    assert len(test_stations) == round(0.2 * 12)
    assert len(train) + len(test) == len(task)

    again_train, again_test = split_by_station(task, 0.2, seed=0)
    assert again_test.keys == test.keys
    assert np.array_equal(again_train.features.values, train.features.values)


def test_split_edges(synthetic_station_csv):
    task = build_supervised(parse_dataset(synthetic_station_csv))

    train, test = split_by_station(task, 0.0, seed=0)
    assert len(test) == 0 and len(train) == len(task)

    train, test = split_by_station(task, 0.01, seed=0)
    assert len({key[0] for key in test.keys}) == 1

    for fraction in (-0.1, 1.0):
        with pytest.raises(DataError):
            split_by_station(task, fraction, seed=0)


def test_split_single_station_keeps_everything_in_train():
    ds = parse_dataset(csv_text(station_visits(("8-2019", 9.0), ("12-2019", 4.5), ("4-2020", 3.5))))
    train, test = split_by_station(build_supervised(ds), 0.5, seed=1)
    assert (len(train), len(test)) == (2, 0)
