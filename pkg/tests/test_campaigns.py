import json
import math

import pytest

from core.errors import IngestError, InputError, UnknownCategoryError
from modules.campaigns.maps import build_field_map, normalize_category, resolve_path
from modules.campaigns.repository import CampaignRepository, ingest, load_mapping
from modules.campaigns.services import (
    build_features,
    comment_score_frame,
    dataset_summary,
    descriptives,
    descriptives_wide,
    score_frame,
    total_raised_check,
)

VALID = {
    "id": "c1",
    "category": "Animals",
    "appeal": "help dog",
    "goal": 500,
    "photos": 0,
    "donations": [5, 10],
    "comments": [],
}


@pytest.mark.parametrize(
    "raw, expected",
    [("Financial Emergency", "Emergency"), ("animals", "Animals"), ("  MEDICAL ", "Medical")],
)
def test_normalize_category(raw, expected):
    assert normalize_category(raw) == expected


def test_unknown_category_is_rejected():
    with pytest.raises(UnknownCategoryError):
        normalize_category("Education")


def test_extra_aliases_from_mapping():
    assert normalize_category("Vet bills", {"vet bills": "Animals"}) == "Animals"


def test_resolve_dot_paths():
    payload = {"meta": {"goal": {"amount": 7}}, "items": [{"x": 1}]}
    assert resolve_path(payload, "meta.goal.amount") == 7
    assert resolve_path(payload, "items.0.x") == 1
    assert resolve_path(payload, "meta.missing") is None


def test_unknown_mapping_field_is_an_error():
    with pytest.raises(KeyError):
        build_field_map({"fields": {"title": "name"}})


def test_ingest_valid_line(write_jsonl):
    result = ingest(write_jsonl([VALID]))
    assert len(result.records) == 1
    record = result.records[0]
    assert record.campaign_id == "c1"
    assert record.donations == (5.0, 10.0)
    assert record.average_donation == 7.5


def test_missing_goal_is_rejected_with_reason(write_jsonl):
    broken = {key: value for key, value in VALID.items() if key != "goal"}
    result = ingest(write_jsonl([VALID, {**broken, "id": "c2"}]))
    assert [reject.reason for reject in result.rejects] == ["missing field: goal_amount"]
    assert result.rejects[0].line_no == 2
    assert result.rejects[0].campaign_id == "c2"


def test_rejects_are_collected_in_line_order(write_jsonl):
    rows = [
        VALID,
        {**VALID, "id": "c2", "category": "Education"},
        "{not json",
        {**VALID, "id": "c1"},
        {**VALID, "id": "c3", "donations": [5, -1]},
        {**VALID, "id": "c4"},
        {**VALID, "id": "c5"},
        {**VALID, "id": "c6"},
    ]
    result = ingest(write_jsonl(rows))
    assert [reject.line_no for reject in result.rejects] == [2, 3, 4, 5]
    assert "unknown category" in result.rejects[0].reason
    assert result.rejects[1].reason.startswith("invalid JSON")
    assert "duplicate campaign_id" in result.rejects[2].reason
    assert "non-positive donation" in result.rejects[3].reason
    assert [record.campaign_id for record in result.records] == ["c1", "c4", "c5", "c6"]


def test_invalid_utf8_line_is_rejected_not_fatal(tmp_path):
    path = tmp_path / "campaigns.jsonl"
    lines = [
        json.dumps(VALID).encode("utf-8"),
        b"{\"id\": \"caf\xe9\"}",
        json.dumps({**VALID, "id": "c2"}).encode("utf-8"),
    ]
    path.write_bytes(b"\n".join(lines) + b"\n")
    result = ingest(path)
    assert [record.campaign_id for record in result.records] == ["c1", "c2"]
    assert [(reject.line_no, reject.reason) for reject in result.rejects] == [(2, "invalid UTF-8")]


def test_majority_rejected_aborts(write_jsonl):
    rows = [VALID, "{bad", "{bad", "{bad"]
    with pytest.raises(IngestError) as excinfo:
        ingest(write_jsonl(rows))
    assert len(excinfo.value.rejects) == 3


def test_empty_dataset_is_an_ingest_error(write_jsonl):
    with pytest.raises(IngestError, match="no records ingested"):
        ingest(write_jsonl([]))


def test_missing_dataset_is_an_input_error(tmp_path):
    with pytest.raises(InputError):
        ingest(tmp_path / "absent.jsonl")


def test_mapping_file_renames_fields(tmp_path, write_jsonl):
    mapping_path = tmp_path / "mapping.toml"
    mapping_path.write_text(
        '[fields]\ncampaign_id = "meta.slug"\nappeal_text = "story.body"\n'
        '[categories]\n"Vet Bills" = "Animals"\n',
        encoding="utf-8",
    )
    row = {"meta": {"slug": "x9"}, "category": "Vet Bills", "story": {"body": "help"}, "goal": 50}
    result = CampaignRepository(write_jsonl([row]), load_mapping(mapping_path)).load()
    record = result.records[0]
    assert record.campaign_id == "x9"
    assert record.category == "Animals"
    assert record.appeal_text == "help"
    assert record.photo_count == 0 and record.donations == () and record.comments == ()


def test_sentiment_column_override(write_jsonl):
    result = ingest(write_jsonl([{**VALID, "vader": -0.4}]), sentiment_column="vader")
    assert result.records[0].sentiment_compound == -0.4


def test_feature_row_values(make_record, toy_axes, toy_table, toy_valence):
    record = make_record(donations=[10, 20], photo_count=0, comments=[])
    build = build_features([record], toy_axes, toy_table, toy_valence)
    row = build.rows[0]
    assert row.log_n_comments == 0.0
    assert row.log_photos == 0.0
    assert row.avg_amount == 15.0
    assert row.log_avg_amount == pytest.approx(math.log(16.0))
    assert row.log_n_donations == pytest.approx(math.log(3.0))
    assert row.log_length == pytest.approx(math.log(3.0))
    assert row.care == pytest.approx(math.sqrt(0.5) / 2)


def test_no_donations_means_no_average(make_record, toy_axes, toy_table, toy_valence):
    row = build_features([make_record()], toy_axes, toy_table, toy_valence).rows[0]
    assert row.log_avg_amount is None
    assert row.log_n_donations == 0.0


def test_all_oov_appeal_is_dropped(make_record, toy_axes, toy_table, toy_valence):
    kept = make_record()
    dropped = make_record(appeal_text="zzz qqq")
    build = build_features([kept, dropped], toy_axes, toy_table, toy_valence)
    assert [row.campaign_id for row in build.rows] == [kept.campaign_id]
    assert build.dropped == [(dropped.campaign_id, "undefined moral scores")]


def test_sentiment_uses_override(make_record, toy_axes, toy_table, toy_valence):
    record = make_record(appeal_text="love help dog", sentiment_compound=-0.3)
    assert build_features([record], toy_axes, toy_table, toy_valence).rows[0].sentiment == "negative"


def test_score_frame_is_sorted_and_keeps_undefined(make_record, toy_axes, toy_table):
    records = [
        make_record(campaign_id="b", appeal_text="care"),
        make_record(campaign_id="a", appeal_text="zzz"),
    ]
    frame = score_frame(records, toy_axes, toy_table)
    assert list(frame["campaign_id"]) == ["a", "b"]
    assert frame["care"].isna().tolist() == [True, False]
    assert frame.loc[1, "care"] == pytest.approx(1.0)


def test_comment_scores_are_indexed(make_record, toy_axes, toy_table):
    record = make_record(comments=["care", "harm harm"])
    frame = comment_score_frame([record], toy_axes, toy_table)
    assert list(frame["comment_index"]) == [1, 2]
    assert frame["care"].tolist() == pytest.approx([1.0, -1.0])


def test_descriptives_two_campaign_category(make_record, toy_axes, toy_table, toy_valence):
    records = [
        make_record(appeal_text=" ".join(["dog"] * 100)),
        make_record(appeal_text=" ".join(["dog"] * 300)),
        make_record(category="Medical"),
    ]
    rows = build_features(records, toy_axes, toy_table, toy_valence).rows
    table = descriptives(rows)
    length = table[(table["variable"] == "appeal_length") & (table["category"] == "Animals")].iloc[0]
    assert length["mean"] == pytest.approx(200.0)
    assert length["sd"] == pytest.approx(141.421356, rel=1e-6)
    single = table[(table["variable"] == "goal_amount") & (table["category"] == "Medical")].iloc[0]
    assert single["n"] == 1
    assert single["sd"] is None or math.isnan(single["sd"])

    wide = descriptives_wide(table)
    assert list(wide.columns) == ["Animals", "Medical"]
    assert wide.loc["Campaign appeal length", "Animals"] == "200.00 (141.42)"


def test_total_raised_is_monotone_in_count(make_record):
    records = [make_record(donations=[5.0] * count) for count in (1, 3, 4, 9)]
    check = total_raised_check(records)
    assert check["rho"] == pytest.approx(1.0)
    assert check["n"] == 4


def test_dataset_summary_shares(write_jsonl):
    rows = [
        {**VALID, "id": "a", "category": "Financial Emergency", "goal": 10, "donations": [10]},
        {**VALID, "id": "b", "category": "Emergency"},
        {**VALID, "id": "c", "category": "Animals"},
        {**VALID, "id": "d", "category": "Memorial", "comments": ["thanks"]},
    ]
    result = ingest(write_jsonl(rows))
    summary = dataset_summary(result)
    values = {(row.statistic, row.level): row.value for row in summary.itertuples()}
    assert values[("campaigns", "all")] == 4
    assert values[("raw_category_share", "Financial Emergency")] == 0.25
    assert values[("category_share", "Emergency")] == 0.5
    assert values[("category_share", "Medical")] == 0.0
    assert values[("donation_transactions", "all")] == 7
    assert values[("comments", "all")] == 1
    assert values[("goal_reached_share", "all")] == 0.25
