from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from synth import make_appeals, make_themes, write_corpus  # noqa: E402


@pytest.fixture(scope="session")
def synthetic_corpus_500(tmp_path_factory):
    """500 labeled synthetic appeals plus their theme catalog, on disk."""
    directory = tmp_path_factory.mktemp("synth500")
    themes = make_themes(60)
    appeals = make_appeals(themes, 500, seed=7)
    appeals_path, themes_path = write_corpus(directory, themes, appeals)
    return appeals_path, themes_path


@pytest.fixture(scope="session")
def synthetic_corpus_100(tmp_path_factory):
    """100-appeal fixture used by determinism checks."""
    directory = tmp_path_factory.mktemp("synth100")
    themes = make_themes(40)
    appeals = make_appeals(themes, 100, seed=11)
    appeals_path, themes_path = write_corpus(directory, themes, appeals)
    return appeals_path, themes_path


@pytest.fixture()
def tiny_themes_file(tmp_path):
    path = tmp_path / "themes.csv"
    path.write_text(
        "id,text\n"
        "T1,prescrição intercorrente execução fiscal\n"
        "T2,honorários advocatícios sucumbência recursal\n"
        "T3,contribuição previdenciária servidor público\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture()
def tiny_appeals_file(tmp_path):
    path = tmp_path / "appeals.csv"
    path.write_text(
        "id,text,theme\n"
        "A1,O recurso discute a prescrição intercorrente na execução fiscal da dívida. "
        "Nada mais consta dos autos.,T1\n"
        "A2,Trata-se de honorários advocatícios fixados em sucumbência recursal pelo juízo. "
        "O restante é irrelevante.,T2\n"
        "A3,Discute-se contribuição previdenciária devida por servidor público estável. "
        "Outros pontos não importam.,T3\n",
        encoding="utf-8",
    )
    return path
