from __future__ import annotations

import pytest

from idiomforge.errors import CatalogError, MissingKey, MissingParam
from idiomforge.l10n import (
    CatalogSet,
    MessageCatalog,
    load_catalog_dir,
    load_default_catalogs,
)


class TestRender:
    def test_substitution(self):
        cat = MessageCatalog.parse("morning_idiom=Today we play {idiom}!", "en")
        out = cat.render("morning_idiom", {"idiom": "pull one's leg"})
        assert out == "Today we play pull one's leg!"
        assert "{" not in out

    def test_missing_key(self):
        cat = MessageCatalog.parse("a=b", "en")
        with pytest.raises(MissingKey):
            cat.render("nope")

    def test_missing_param(self):
        cat = MessageCatalog.parse("k=hello {name} at {hour}", "en")
        with pytest.raises(MissingParam):
            cat.render("k", {"name": "x"})

    def test_duplicate_key_rejected(self):
        with pytest.raises(CatalogError):
            MessageCatalog.parse("a=1\na=2", "en")


class TestParity:
    def test_shipped_catalogs_in_parity(self):
        catalogs = load_default_catalogs()
        assert set(catalogs.languages) == {"en", "it", "tr"}
        assert catalogs.lint() == []

    def test_key_missing_in_one_language_fails(self, tmp_path):
        (tmp_path / "tr.txt").write_text("a=bir {x}\nb=iki\n", encoding="utf-8")
        (tmp_path / "it.txt").write_text("a=uno {x}\n", encoding="utf-8")
        with pytest.raises(CatalogError) as err:
            load_catalog_dir(tmp_path)
        assert "missing key 'b'" in str(err.value)

    def test_placeholder_divergence_fails(self, tmp_path):
        (tmp_path / "en.txt").write_text("a=hello {x}\n", encoding="utf-8")
        (tmp_path / "it.txt").write_text("a=ciao {y}\n", encoding="utf-8")
        problems = load_catalog_dir(tmp_path, lint=False).lint()
        assert any("placeholders differ" in p for p in problems)

    def test_render_via_set(self):
        catalogs = load_default_catalogs()
        for lang in ("en", "it", "tr"):
            text = catalogs.render("notif_morning", lang, {"idiom": "pull * leg", "gloss": "tease"})
            assert "pull * leg" in text

    def test_every_engine_notification_key_present_everywhere(self):
        catalogs = load_default_catalogs()
        needed = {
            "notif_morning",
            "notif_score_change_need_nonidiomatic",
            "notif_score_change_need_idiomatic",
            "notif_score_change_back_to_normal",
            "notif_happy_hour",
            "notif_like_received",
            "notif_rank_gained",
            "notif_rank_lost",
        }
        for lang in catalogs.languages:
            assert needed <= catalogs.catalogs[lang].keys()
