import numpy as np
import pytest

from aquagauge.ingest import WaterSample
from aquagauge.wqi import SubIndices, WqiRecord, weighted_scores, wqi_from_sub

# Header exactly as the station survey exports it
HEADER = (
    "Serial No,STATION CODE,LOCATIONS,State,Temp,D.O. (mg/l),pH,CONDUCTIVITY,B.O.D.,"
    "NITRATENAN N+ NITRITENANN (mg/l),FECAL COLIFORM (MPN/100ml),Total COLIFORM (MPN/100ml) Mean,Month and year"
)


def csv_row(serial, station, month_year, do, ph, ec, bod, na, tc, temp="29.0", fecal="10",
            location="Test Area", state="Dhaka"):
    cells = [serial, station, location, state, temp, do, ph, ec, bod, na, fecal, tc, month_year]
    return ",".join(str(cell) for cell in cells)


def csv_text(rows):
    return "\n".join([HEADER] + list(rows)) + "\n"


# Several stations sampled every four months with smoothly drifting chemistry
def synthetic_csv(n_stations=12, n_visits=6, seed=0):
    rng = np.random.default_rng(seed)
    rows = []
    serial = 0
    for station in range(n_stations):
        base = {
            "do": rng.uniform(3.0, 10.0),
            "ph": rng.uniform(6.4, 8.8),
            "ec": rng.uniform(40.0, 320.0),
            "bod": rng.uniform(0.5, 90.0),
            "na": rng.uniform(0.1, 120.0),
            "tc": rng.uniform(2.0, 1500.0),
        }
        for visit in range(n_visits):
            month_index = 2018 * 12 + visit * 4
            month_year = f"{month_index % 12 + 1}-{month_index // 12}"
            drift = {key: value * rng.uniform(0.85, 1.15) for key, value in base.items()}
            rows.append(csv_row(
                serial,
                1000 + station,
                month_year,
                do=round(drift["do"], 2),
                ph=round(min(drift["ph"], 14.0), 2),
                ec=round(drift["ec"], 1),
                bod=round(drift["bod"], 2),
                na=round(drift["na"], 2),
                tc=round(drift["tc"], 1),
                temp=round(rng.uniform(20.0, 32.0), 1),
            ))
            serial += 1
    return csv_text(rows)


def make_sample(do=9.0, ph=7.3, ec=158.0, bod=1.8, na=7.2, tc=280.0, temp=29.0,
                station="3010", month=8, year=2018):
    return WaterSample(
        station_code=station,
        location="Test Area",
        state="Dhaka",
        month=month,
        year=year,
        temp=temp,
        dissolved_oxygen=do,
        ph=ph,
        conductivity=ec,
        bod=bod,
        nitrate=na,
        fecal_coliform=10.0,
        total_coliform=tc,
    )


# A record with chosen sub-indices; wqi defaults to the value they imply
def make_record(wqi=None, sub=(100, 100, 100, 100, 100, 100), sample=None):
    sub = SubIndices(*sub)
    return WqiRecord(
        sample=sample,
        sub=sub,
        weighted=weighted_scores(sub),
        wqi=wqi_from_sub(sub) if wqi is None else wqi,
    )


@pytest.fixture
def survey_csv():
    return csv_text([
        "0,1207,Dhanmondi Lake Area, Dhaka,Dhaka,30.6,6.7,7.5,203,1.3,0.1,11,27,8-2019",
        "1,1207,Dhanmondi 27 Area, Dhaka,Dhaka,29.8,5.7,7.2,189,2,0.2,4953,8391,8-2019",
        "2,1208,Mirpur Area, Dhaka,Dhaka,29.5,6.3,6.9,179,1.7,0.1,3243,5330,8-2019",
        "3,9320,Dighala Area, Khulna,Khulna,29.7,5.8,6.9,64,3.8,0.5,5382,84443,9-2019",
        "4,9140,Tala Area, Satkhira,Satkhira,28.2,6.1,6.7,308,1.4,0.3,3428,5672,9-2019",
    ])


@pytest.fixture
def synthetic_station_csv():
    return synthetic_csv()
