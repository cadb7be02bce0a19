from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from phishtriage.api import ApiState, FeedbackStore, create_app
from phishtriage.model import Verdict, VerdictSource, VerdictStatus, normalize, utcnow

BAD = "https://evil.tld/login"


@pytest.fixture
def state(blacklist, cache, queue, ftw):
    return ApiState(blacklist=blacklist, cache=cache, queue=queue, ftw=ftw)


@pytest.fixture
def client(state):
    return TestClient(create_app(state))


def cached_verdict(status=VerdictStatus.PHISHING, source=VerdictSource.RBPD, brand="PayPal"):
    return Verdict(status=status, source=source, decided_at=utcnow(), target_brand=brand)


class TestDetect:
    def test_blacklisted(self, client, blacklist):
        blacklist.load_lines([BAD])
        resp = client.post("/api/v1/detect", json={"urls": [BAD]})
        assert resp.status_code == 200
        body = resp.json()
        assert len(body) == 1
        assert body[0]["status"] == "phishing"
        assert body[0]["source"] == "local_blacklist"

    def test_empty_list_400(self, client):
        assert client.post("/api/v1/detect", json={"urls": []}).status_code == 400

    def test_oversized_list_400(self, client):
        urls = [f"https://u{i}.tld" for i in range(1001)]
        assert client.post("/api/v1/detect", json={"urls": urls}).status_code == 400

    def test_malformed_body_400(self, client):
        assert client.post("/api/v1/detect", json={"nope": 1}).status_code == 400

    def test_order_preserved(self, client, blacklist):
        blacklist.load_lines([BAD])
        urls = ["https://fresh.tld/a", BAD, "https://fresh.tld/b"]
        body = client.post("/api/v1/detect", json={"urls": urls}).json()
        assert [r["url"] for r in body] == urls
        assert [r["status"] for r in body] == ["pending", "phishing", "pending"]

    def test_unknown_becomes_pending(self, client, queue):
        body = client.post("/api/v1/detect", json={"urls": ["https://new.tld"]}).json()
        assert body[0]["status"] == "pending"
        assert queue.depth == 1


class TestDetectText:
    def test_extracts_and_detects(self, client, blacklist):
        blacklist.load_lines([BAD])
        resp = client.post(
            "/api/v1/detect-text", json={"text": f"visit {BAD} now"}
        )
        body = resp.json()
        assert body["extracted_urls"] == [BAD]
        assert body["results"][0]["status"] == "phishing"

    def test_no_urls(self, client):
        body = client.post("/api/v1/detect-text", json={"text": "no links here"}).json()
        assert body == {"extracted_urls": [], "results": []}

    def test_oversized_text_400(self, client):
        text = "x" * (1024 * 1024 + 1)
        assert client.post("/api/v1/detect-text", json={"text": text}).status_code == 400

    def test_parenthesized_url(self, client):
        body = client.post(
            "/api/v1/detect-text", json={"text": "see (https://a.co/x)."}
        ).json()
        assert body["extracted_urls"] == ["https://a.co/x"]


class TestResult:
    def test_queued_is_pending(self, client, queue):
        queue.enqueue(normalize("https://queued.tld"))
        body = client.get("/api/v1/result", params={"url": "https://queued.tld"}).json()
        assert body["status"] == "pending"

    def test_cached_phishing(self, client, cache):
        cache.put(normalize(BAD), cached_verdict())
        body = client.get("/api/v1/result", params={"url": BAD}).json()
        assert body["status"] == "phishing"
        assert body["target_brand"] == "PayPal"

    def test_never_seen_unknown(self, client):
        body = client.get("/api/v1/result", params={"url": "https://never.tld"}).json()
        assert body["status"] == "unknown"

    def test_lookup_never_enqueues(self, client, queue):
        client.get("/api/v1/result", params={"url": "https://never.tld"})
        assert queue.depth == 0

    def test_unparseable_400(self, client):
        assert client.get("/api/v1/result", params={"url": "http://"}).status_code == 400

    def test_in_flight_is_pending(self, client, queue):
        queue.enqueue(normalize("https://busy.tld"))
        queue.dequeue(0.1)
        body = client.get("/api/v1/result", params={"url": "https://busy.tld"}).json()
        assert body["status"] == "pending"


class TestFeedback:
    def submit(self, client, url=BAD, status="benign"):
        return client.post(
            "/api/v1/feedback",
            json={"url": url, "proposed_status": status, "comment": "fp"},
        ).json()

    def test_approve_overrides_blacklist(self, client, blacklist):
        blacklist.load_lines([BAD])
        fb = self.submit(client)
        resp = client.post(f"/api/v1/feedback/{fb['id']}/review", json={"decision": "approve"})
        assert resp.status_code == 200
        body = client.post("/api/v1/detect", json={"urls": [BAD]}).json()
        assert body[0]["status"] == "benign"
        assert body[0]["source"] == "user_feedback"

    def test_reject_leaves_cache_untouched(self, client, cache):
        fb = self.submit(client)
        client.post(f"/api/v1/feedback/{fb['id']}/review", json={"decision": "reject"})
        assert len(cache) == 0

    def test_double_review_409(self, client):
        fb = self.submit(client)
        client.post(f"/api/v1/feedback/{fb['id']}/review", json={"decision": "approve"})
        resp = client.post(f"/api/v1/feedback/{fb['id']}/review", json={"decision": "approve"})
        assert resp.status_code == 409

    def test_unknown_id_404(self, client):
        resp = client.post("/api/v1/feedback/nope/review", json={"decision": "approve"})
        assert resp.status_code == 404

    def test_pending_status_rejected(self, client):
        resp = client.post(
            "/api/v1/feedback", json={"url": BAD, "proposed_status": "pending"}
        )
        assert resp.status_code == 400

    def test_review_token_gate(self, blacklist, cache, queue, ftw):
        state = ApiState(
            blacklist=blacklist, cache=cache, queue=queue, ftw=ftw, review_token="s3cret"
        )
        client = TestClient(create_app(state))
        fb = self.submit(client)
        denied = client.post(f"/api/v1/feedback/{fb['id']}/review", json={"decision": "approve"})
        assert denied.status_code == 403
        ok = client.post(
            f"/api/v1/feedback/{fb['id']}/review",
            json={"decision": "approve"},
            headers={"X-Review-Token": "s3cret"},
        )
        assert ok.status_code == 200

    def test_every_approval_has_cache_entry(self, client, cache):
        for i in range(3):
            fb = self.submit(client, url=f"https://fp{i}.tld")
            client.post(f"/api/v1/feedback/{fb['id']}/review", json={"decision": "approve"})
        for i in range(3):
            got = cache.get(normalize(f"https://fp{i}.tld"))
            assert got is not None and got.source == VerdictSource.USER_FEEDBACK


class TestStatsHealth:
    def test_stats_counts(self, client, cache):
        for i in range(3):
            cache.put(normalize(f"https://p{i}.tld"), cached_verdict())
        body = client.get("/api/v1/stats").json()
        assert body["unique_phishing_count"] == 3
        assert body["per_brand_counts"][0] == {"brand": "PayPal", "count": 3}

    def test_window_zero_400(self, client):
        assert client.get("/api/v1/stats", params={"window_days": 0}).status_code == 400

    def test_distribution_sums_to_one(self, client, cache):
        cache.put(normalize("https://p1.tld"), cached_verdict(source=VerdictSource.RBPD))
        cache.put(normalize("https://p2.tld"),
                  cached_verdict(source=VerdictSource.ONLINE_BLACKLIST))
        dist = client.get("/api/v1/stats").json()["source_distribution"]
        assert abs(sum(dist.values()) - 1.0) < 1e-9

    def test_health_gauges(self, client, queue, blacklist, state):
        blacklist.load_lines(["https://a.tld"])
        queue.enqueue(normalize("https://b.tld"))
        body = client.get("/api/v1/health").json()
        assert body["queue_depth"] == 1
        assert body["blacklist_version"] == 1
        assert body["workers"] == {"ftw": 8, "stw": 4}


class TestStatelessness:
    def test_two_apps_same_stores_agree(self, blacklist, cache, queue, ftw):
        blacklist.load_lines([BAD])
        state = ApiState(blacklist=blacklist, cache=cache, queue=queue, ftw=ftw)
        c1 = TestClient(create_app(state))
        c2 = TestClient(create_app(state))
        r1 = c1.post("/api/v1/detect", json={"urls": [BAD]}).json()
        r2 = c2.post("/api/v1/detect", json={"urls": [BAD]}).json()
        assert r1[0]["status"] == r2[0]["status"] == "phishing"
