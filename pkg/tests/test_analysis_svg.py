from quasicross.analysis import analysis_json, analyze, subsample_json
from quasicross.bounds import monte_carlo_subsample
from quasicross.drawing import Drawing, Edge, Vertex, convex_complete
from quasicross.fileformat import read_drawing_file
from quasicross.geometry import point as P
from quasicross.svg import export_svg, palette_from_env, render_svg


def test_analyze_convex_k6():
    result = analyze(convex_complete(6))
    assert result.is_valid
    assert result.triples.triple_count == 1
    assert result.triples.crossing_pair_count == 15
    assert result.bounds.best_integer_lower_bound == 0


def test_analysis_json_shape():
    doc = analysis_json(analyze(convex_complete(6)))
    assert doc["n"] == 6 and doc["e"] == 15
    assert doc["validation"]["is_valid"] is True
    assert doc["triple_count"] == 1
    assert doc["crossing_pair_count"] == 15
    assert len(doc["crossings"]) == 15
    (triple,) = doc["triples"]
    assert sorted(map(tuple, triple)) == [("1", "4"), ("2", "5"), ("3", "6")]
    assert doc["bounds"]["eq1"] == "-4"
    # exact rational strings only
    for crossing in doc["crossings"]:
        assert all(isinstance(c, str) for c in crossing["point"])


def test_analysis_json_invalid_drawing(fixtures_dir):
    d = read_drawing_file(str(fixtures_dir / "double_crossing.json"))
    doc = analysis_json(analyze(d))
    assert doc["validation"]["is_valid"] is False
    assert doc["triple_count"] is None
    assert doc["validation"]["violations"][0]["kind"] == "multiple_meetings"


def test_subsample_json_has_exact_and_approx_errors():
    stats = monte_carlo_subsample(convex_complete(6), "1/2", 200, 4)
    doc = subsample_json(stats)
    assert doc["p"] == "1/2"
    assert "/" in doc["expected"]["triples"] or doc["expected"]["triples"].isdigit()
    assert "se_squared" in doc and "se_approx" in doc


# ------------------------------------------------------------------- svg

def test_svg_deterministic_and_marked(tmp_path):
    d = convex_complete(6)
    result = analyze(d)
    text1 = render_svg(result)
    text2 = render_svg(result)
    assert text1 == text2
    # exactly one triple marker circle
    assert text1.count('stroke="#cc0000"') == 1
    # all six vertices labeled
    for vid in "123456":
        assert f">{vid}</text>" in text1

    out = tmp_path / "k6.svg"
    export_svg(d, str(out), result)
    assert out.read_text() == text1


def test_svg_no_triples_no_circles():
    text = render_svg(analyze(convex_complete(5)))
    assert text.count('stroke="#cc0000"') == 0


def test_svg_tag_palette_and_env_override():
    d = Drawing(
        [Vertex("a", P(0, 0)), Vertex("b", P(4, 1)), Vertex("c", P(2, 5))],
        [Edge("a", "b", tag="pink"), Edge("b", "c", tag="darkblue"),
         Edge("a", "c", tag="mystery")])
    text = render_svg(analyze(d), palette_from_env({}))
    assert 'stroke="#e7549b"' in text
    assert 'stroke="#00008b"' in text
    assert 'stroke="#000000"' in text  # unknown tag falls back to black

    custom = palette_from_env({"QUASICROSS_PALETTE": "pink=#123456, mystery=#abcdef"})
    text = render_svg(analyze(d), custom)
    assert 'stroke="#123456"' in text
    assert 'stroke="#abcdef"' in text
