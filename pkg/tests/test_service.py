import io
import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from fastapi.testclient import TestClient
from PIL import Image

from novascout.service import create_app
from novascout.synth import natural_image, three_color_image


def png_bytes(img: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(img).save(buf, format="PNG")
    return buf.getvalue()


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "service-out", restore=False)
    with TestClient(app) as c:
        yield c


def create_session(client, **overrides):
    r = client.post("/sessions", json=overrides)
    assert r.status_code == 200, r.text
    return r.json()


class TestSessionLifecycle:
    def test_default_session_config(self, client):
        info = create_session(client)
        assert info["config"]["theta_deg"] == 5.0
        assert info["config"]["mode"] == "both"
        assert info["image_count"] == 0

    def test_invalid_config_names_field(self, client):
        r = client.post("/sessions", json={"theta_deg": -1.0})
        assert r.status_code == 400
        body = r.json()
        assert body["error"] == "invalid-config"
        assert body["field"] == "theta_deg"

    def test_distinct_ids(self, client):
        a = create_session(client)
        b = create_session(client)
        assert a["id"] != b["id"]

    def test_unknown_session_errors(self, client):
        for method, url in [
            ("post", "/sessions/nope/images"),
            ("get", "/sessions/nope/memory"),
            ("post", "/sessions/nope/reset"),
            ("get", "/sessions/nope/summary"),
            ("get", "/sessions/nope/results/0"),
        ]:
            r = getattr(client, method)(url)
            assert r.status_code == 404
            assert r.json()["error"] == "unknown-session"


class TestSubmitImage:
    def test_first_upload_all_novel(self, client):
        sid = create_session(client, mode="novelty")["id"]
        r = client.post(f"/sessions/{sid}/images",
                        content=png_bytes(three_color_image()))
        assert r.status_code == 200, r.text
        doc = r.json()
        assert doc["image_index"] == 0
        assert doc["segment_count"] == 3
        assert all(s["novel"] for s in doc["segments"])
        assert doc["stored_count"] == 3
        assert "novelty" in doc["map_urls"]

    def test_identical_second_upload_black_novelty_map(self, client):
        sid = create_session(client, mode="novelty")["id"]
        payload = png_bytes(three_color_image())
        client.post(f"/sessions/{sid}/images", content=payload)
        doc = client.post(f"/sessions/{sid}/images", content=payload).json()
        assert all(not s["novel"] for s in doc["segments"])
        png = client.get(doc["map_urls"]["novelty"])
        assert png.status_code == 200
        arr = np.asarray(Image.open(io.BytesIO(png.content)))
        assert np.all(arr == 0)

    def test_decode_failure(self, client):
        sid = create_session(client)["id"]
        r = client.post(f"/sessions/{sid}/images", content=b"not an image")
        assert r.status_code == 400
        assert r.json()["error"] == "decode-failure"

    def test_payload_cap(self, tmp_path):
        app = create_app(tmp_path / "o", restore=False, max_upload_bytes=100)
        with TestClient(app) as client:
            sid = create_session(client)["id"]
            payload = png_bytes(three_color_image())
            assert len(payload) > 100
            r = client.post(f"/sessions/{sid}/images", content=payload)
            assert r.status_code == 413
            assert r.json()["error"] == "payload-too-large"

    def test_interest_points_in_both_mode(self, client):
        sid = create_session(client, mode="both")["id"]
        doc = client.post(f"/sessions/{sid}/images",
                          content=png_bytes(natural_image(5, 128, 96))).json()
        assert len(doc["interest_points"]) == 3
        overlay = client.get(doc["map_urls"]["overlay"])
        assert overlay.status_code == 200


class TestMemoryEndpoints:
    def test_fresh_memory_zero(self, client):
        sid = create_session(client)["id"]
        snap = client.get(f"/sessions/{sid}/memory").json()
        assert snap["stored_count"] == 0
        assert all(w == 0.0 for w in snap["weights"])
        assert snap["n"] == 18

    def test_memory_counts_mirror_verdicts(self, client):
        sid = create_session(client, mode="novelty")["id"]
        client.post(f"/sessions/{sid}/images", content=png_bytes(three_color_image()))
        snap = client.get(f"/sessions/{sid}/memory").json()
        assert snap["stored_count"] == 3
        assert len(snap["patterns"]) == 3

    def test_weights_symmetric_zero_diagonal(self, client):
        sid = create_session(client, mode="novelty")["id"]
        client.post(f"/sessions/{sid}/images",
                    content=png_bytes(natural_image(1, 64, 48)))
        snap = client.get(f"/sessions/{sid}/memory").json()
        w = np.array(snap["weights"]).reshape(18, 18)
        assert np.array_equal(w, w.T)
        assert np.all(np.diag(w) == 0)

    def test_reset_then_novel_again(self, client):
        sid = create_session(client, mode="novelty")["id"]
        payload = png_bytes(three_color_image())
        client.post(f"/sessions/{sid}/images", content=payload)
        r = client.post(f"/sessions/{sid}/reset")
        assert r.json()["stored_count"] == 0
        snap = client.get(f"/sessions/{sid}/memory").json()
        assert snap["stored_count"] == 0
        doc = client.post(f"/sessions/{sid}/images", content=payload).json()
        assert all(s["novel"] for s in doc["segments"])

    def test_reset_idempotent(self, client):
        sid = create_session(client)["id"]
        assert client.post(f"/sessions/{sid}/reset").status_code == 200
        assert client.post(f"/sessions/{sid}/reset").status_code == 200


class TestResultsAndSummary:
    def test_result_sidecar_matches_submission(self, client):
        sid = create_session(client, mode="novelty")["id"]
        submitted = client.post(f"/sessions/{sid}/images",
                                content=png_bytes(three_color_image())).json()
        stored = client.get(f"/sessions/{sid}/results/0").json()
        assert stored["segments"] == submitted["segments"]
        assert stored["image_index"] == 0

    def test_summary_counts(self, client):
        sid = create_session(client, mode="novelty")["id"]
        client.post(f"/sessions/{sid}/images", content=png_bytes(three_color_image()))
        s = client.get(f"/sessions/{sid}/summary").json()
        assert s["images_processed"] == 1
        assert s["patterns_stored"] == 3
        assert s["novel_rate_per_image"] == [1.0]

    def test_config_update_logged_and_applied(self, client):
        sid = create_session(client)["id"]
        r = client.post(f"/sessions/{sid}/config", json={"theta_deg": 9.0})
        assert r.status_code == 200
        assert r.json()["config"]["theta_deg"] == 9.0
        r = client.post(f"/sessions/{sid}/config", json={"theta_deg": -2})
        assert r.status_code == 400


class TestConcurrencyAndPersistence:
    def test_concurrent_uploads_serialize_gap_free(self, client):
        sid = create_session(client, mode="novelty")["id"]
        payloads = [png_bytes(natural_image(s, 48, 48)) for s in range(6)]

        def post(p):
            return client.post(f"/sessions/{sid}/images", content=p).json()

        with ThreadPoolExecutor(max_workers=6) as pool:
            docs = list(pool.map(post, payloads))
        indices = sorted(d["image_index"] for d in docs)
        assert indices == list(range(6))
        summary = client.get(f"/sessions/{sid}/summary").json()
        assert summary["images_processed"] == 6

    def test_restart_restores_sessions(self, tmp_path):
        out = tmp_path / "persist"
        img1 = png_bytes(three_color_image())
        app1 = create_app(out, restore=False)
        with TestClient(app1) as c1:
            sid = create_session(c1, mode="novelty")["id"]
            c1.post(f"/sessions/{sid}/images", content=img1)
            snap_before = c1.get(f"/sessions/{sid}/memory").json()

        # Reference: a never-restarted session seeing both images in order.
        ref_out = tmp_path / "ref"
        app_ref = create_app(ref_out, restore=False)
        img2 = png_bytes(natural_image(4, 64, 48))
        with TestClient(app_ref) as cr:
            rid = create_session(cr, mode="novelty")["id"]
            cr.post(f"/sessions/{rid}/images", content=img1)
            ref_doc = cr.post(f"/sessions/{rid}/images", content=img2).json()

        app2 = create_app(out, restore=True)
        with TestClient(app2) as c2:
            snap_after = c2.get(f"/sessions/{sid}/memory").json()
            assert snap_after["weights"] == snap_before["weights"]
            assert snap_after["stored_count"] == snap_before["stored_count"]
            doc = c2.post(f"/sessions/{sid}/images", content=img2).json()
            assert doc["image_index"] == 1
            assert [s["novel"] for s in doc["segments"]] == \
                   [s["novel"] for s in ref_doc["segments"]]
            assert [s["energy"] for s in doc["segments"]] == \
                   [s["energy"] for s in ref_doc["segments"]]
