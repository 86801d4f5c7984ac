import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from rankplot import (
    ColumnSpec,
    PlotStyle,
    RankedDataset,
    TransformConfig,
    geometry_document,
    parse_csv,
    render_styled,
    tau_b_fast,
    to_csv,
)
from rankplot.service import create_app


@pytest.fixture
def client():
    return TestClient(create_app())


def _upload(client, csv_text, **params):
    return client.post(
        "/api/datasets", params=params or {"x": "a", "y": "b", "label": "name"},
        content=csv_text.encode(),
    )


def test_health(client):
    bodies = {client.get("/api/health").text for _ in range(3)}
    assert bodies == {'{"status":"ok"}'}


def test_upload_returns_tau_and_counts(client, ranks8_csv):
    response = _upload(client, ranks8_csv)
    assert response.status_code == 200
    body = response.json()
    assert body["m"] == 8
    assert body["tau"] == pytest.approx(-6 / 28)
    assert body["counts"] == {
        "c": 11, "d": 17, "t_x": 0, "t_y": 0, "t_xy": 0, "total": 28,
    }
    assert body["dropped_rows"] == 0
    assert len(body["id"]) >= 16


def test_upload_single_row_is_422(client):
    response = _upload(client, "name,a,b\nP,1,2\n")
    assert response.status_code == 422
    assert response.json()["code"] == "too_few_rows"


def test_upload_same_column_twice_is_400(client, ranks8_csv):
    response = client.post(
        "/api/datasets", params={"x": "a", "y": "a"}, content=ranks8_csv.encode()
    )
    assert response.status_code == 400
    assert response.json()["code"] == "malformed_csv"


def test_upload_unknown_column_is_400(client, ranks8_csv):
    response = client.post(
        "/api/datasets", params={"x": "a", "y": "zz"}, content=ranks8_csv.encode()
    )
    assert response.status_code == 400


def test_upload_too_large_is_413(ranks8_csv):
    client = TestClient(create_app(max_upload_bytes=64))
    response = _upload(client, ranks8_csv)
    assert response.status_code == 413
    assert response.json()["code"] == "too_large"


def test_upload_undefined_tau_reported_as_null(client):
    response = _upload(client, "name,a,b\nP,1,1\nQ,1,2\nR,1,3\n")
    assert response.status_code == 200
    assert response.json()["tau"] is None


def test_geometry_matches_library(client, ranks8_csv):
    dataset_id = _upload(client, ranks8_csv).json()["id"]
    response = client.get(f"/api/datasets/{dataset_id}/geometry")
    assert response.status_code == 200
    doc = response.json()
    assert len(doc["segments"]) == 28
    assert sum(1 for s in doc["segments"] if s["endpoint"][1] > 0) == 11

    dataset = parse_csv(ranks8_csv, ColumnSpec("a", "b", "name"))
    assert doc == geometry_document(dataset, TransformConfig())


def test_geometry_translate_only_endpoints_equal_deltas(client, ranks8_csv):
    dataset_id = _upload(client, ranks8_csv).json()["id"]
    doc = client.get(
        f"/api/datasets/{dataset_id}/geometry", params={"mode": "translate-only"}
    ).json()
    for seg in doc["segments"]:
        assert seg["endpoint"] == [seg["x"], seg["y"]]


def test_geometry_unknown_id_is_404(client):
    response = client.get("/api/datasets/nope/geometry")
    assert response.status_code == 404
    assert response.json()["code"] == "dataset_not_found"


def test_geometry_bad_mode_is_400(client, ranks8_csv):
    dataset_id = _upload(client, ranks8_csv).json()["id"]
    response = client.get(
        f"/api/datasets/{dataset_id}/geometry", params={"mode": "sideways"}
    )
    assert response.status_code == 400
    assert response.json()["code"] == "bad_mode"


def test_plot_svg_matches_library_bytes(client, ranks8_csv):
    dataset_id = _upload(client, ranks8_csv).json()["id"]
    response = client.get(
        f"/api/datasets/{dataset_id}/plot.svg", params={"style": "segments,clock"}
    )
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("image/svg+xml")

    dataset = parse_csv(ranks8_csv, ColumnSpec("a", "b", "name"))
    expected = render_styled(dataset, PlotStyle.from_tokens("segments,clock"))
    assert response.content == expected.encode()

    again = client.get(
        f"/api/datasets/{dataset_id}/plot.svg", params={"style": "segments,clock"}
    )
    assert again.content == response.content


def test_plot_svg_bad_style_is_400(client, ranks8_csv):
    dataset_id = _upload(client, ranks8_csv).json()["id"]
    response = client.get(
        f"/api/datasets/{dataset_id}/plot.svg", params={"style": "bogus"}
    )
    assert response.status_code == 400
    assert response.json()["code"] == "bad_style"


def test_pair_detail(client, ranks8_csv):
    dataset_id = _upload(client, ranks8_csv).json()["id"]
    body = client.get(f"/api/datasets/{dataset_id}/pairs/0/1").json()
    assert body["a"]["label"] == "p0"
    assert body["b"]["label"] == "p1"
    assert body["class"] == "concordant"
    assert body["dx"] == 66.0 and body["dy"] == 38.0
    assert body["dissimilarity"] == 28.0
    assert body["quadrant"] == "QI"


def test_pair_detail_rejects_bad_indices(client, ranks8_csv):
    dataset_id = _upload(client, ranks8_csv).json()["id"]
    assert client.get(f"/api/datasets/{dataset_id}/pairs/3/3").status_code == 400
    assert client.get(f"/api/datasets/{dataset_id}/pairs/5/2").status_code == 400
    assert client.get(f"/api/datasets/{dataset_id}/pairs/0/99").status_code == 400
    assert client.get("/api/datasets/nope/pairs/0/1").status_code == 404


def test_pair_bars_svg(client, ranks8_csv):
    dataset_id = _upload(client, ranks8_csv).json()["id"]
    response = client.get(f"/api/datasets/{dataset_id}/pairs/0/1/bars.svg")
    assert response.status_code == 200
    assert b'class="bar"' in response.content
    assert b"p0" in response.content


def test_service_tau_equals_library_on_random_uploads(client):
    rng = np.random.default_rng(7)
    for _ in range(5):
        m = int(rng.integers(2, 40))
        ds = RankedDataset(
            x=rng.integers(0, 10, size=m).astype(float),
            y=rng.integers(0, 10, size=m).astype(float),
            x_name="x",
            y_name="y",
        )
        body = client.post(
            "/api/datasets",
            params={"x": "x", "y": "y", "label": "label"},
            content=to_csv(ds).encode(),
        ).json()
        expected = tau_b_fast(ds)
        if expected.tau is None:
            assert body["tau"] is None
        else:
            assert body["tau"] == expected.tau
        assert body["counts"]["c"] == expected.counts.c


def test_store_persists_across_apps(tmp_path, ranks8_csv):
    store = tmp_path / "store"
    first = TestClient(create_app(store_dir=str(store)))
    uploaded = _upload(first, ranks8_csv).json()

    second = TestClient(create_app(store_dir=str(store)))
    reread = second.get(f"/api/datasets/{uploaded['id']}/geometry")
    assert reread.status_code == 200
    assert reread.json()["counts"]["c"] == 11
