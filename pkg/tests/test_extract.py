import dataclasses
import datetime as dt

from hypothesis import given, settings
from hypothesis import strategies as st

from qnacoder.extract import (
    CEREMONY,
    MEETING,
    UNCLASSIFIED,
    classify_event,
    extract_actors,
    flag_for_review,
    flag_reasons,
)
from qnacoder.ingest import DiaryRecord
from qnacoder.synthetic import make_corpus

ROW1 = (
    "On. Sen. Franco MARINI, Presidente del Senato della Repubblica,"
    " e On. Fausto BERTINOTTI, Presidente della Camera dei Deputati"
)
ROW2 = "On. Silvio BERLUSCONI, Presidente di Forza Italia"
ROW3 = (
    "Intervento alla cerimonia di apertura della Conferenza sulla,sicurezza"
    " alimentare, promossa dalla FAO"
)


def _record(description, record_id=1):
    return DiaryRecord(record_id, dt.date(2006, 5, 30), "Palazzo del Quirinale", description)


def test_two_actor_row_extracts_both(vocab):
    m1, m2 = extract_actors(ROW1, vocab)
    assert m1.honorifics == ("On.", "Sen.")
    assert m1.given_name == "Franco"
    assert m1.surname == "MARINI"
    assert m1.role_phrase == "Presidente del Senato della Repubblica"
    assert m1.confidence == "high"
    assert m2.honorifics == ("On.",)
    assert m2.given_name == "Fausto"
    assert m2.surname == "BERTINOTTI"
    assert m2.role_phrase == "Presidente della Camera dei Deputati"
    assert m2.confidence == "high"
    assert m1.span[1] <= m2.span[0]


def test_single_actor_row(vocab):
    (m,) = extract_actors(ROW2, vocab)
    assert m.surname == "BERLUSCONI"
    assert m.role_phrase == "Presidente di Forza Italia"
    assert m.display_name == "On. Silvio BERLUSCONI"


def test_ceremony_row_yields_no_mentions(vocab):
    # FAO is ALL-CAPS but has no honorific or given name before it and sits
    # on the organization stop-list.
    assert extract_actors(ROW3, vocab) == []


def test_multi_token_surname_merges(vocab):
    (m,) = extract_actors("Dott. Diego DELLA VALLE, Imprenditore", vocab)
    assert m.surname == "DELLA VALLE"
    assert m.surname_title == "Della Valle"


def test_lone_particle_never_a_surname(vocab):
    assert extract_actors("parla DI della questione", vocab) == []


def test_apostrophe_surname(vocab):
    (m,) = extract_actors("On. Massimo D'ALEMA, Presidente del Copasir", vocab)
    assert m.surname == "D'ALEMA"
    assert m.surname_title == "D'Alema"


def test_missing_honorific_lowers_confidence(vocab):
    (m,) = extract_actors("Silvio BERLUSCONI, Presidente di Forza Italia", vocab)
    assert m.honorifics == ()
    assert m.confidence == "low"


def test_missing_role_phrase_lowers_confidence(vocab):
    (m,) = extract_actors("On. Silvio BERLUSCONI e il suo seguito", vocab)
    assert m.role_phrase == ""
    assert m.confidence == "low"


def test_classify_meeting(vocab):
    mentions = extract_actors(ROW2, vocab)
    assert classify_event(ROW2, mentions, vocab) == MEETING


def test_classify_ceremony(vocab):
    assert classify_event(ROW3, [], vocab) == CEREMONY


def test_classify_unclassified(vocab):
    assert classify_event("", [], vocab) == UNCLASSIFIED


def test_flag_high_confidence_meeting_is_auto(vocab):
    # Hand-applied rule: both mentions carry an honorific and a nonempty
    # role phrase, so nothing forces review.
    mentions = extract_actors(ROW1, vocab)
    assert all(m.confidence == "high" for m in mentions)
    assert flag_for_review(_record(ROW1), mentions, MEETING) == "auto"


def test_flag_low_confidence_mention(vocab):
    text = "Silvio BERLUSCONI, Presidente di Forza Italia"
    mentions = extract_actors(text, vocab)
    assert flag_for_review(_record(text), mentions, MEETING) == "flagged"
    assert "no_honorific" in flag_reasons(mentions, MEETING)


def test_flag_unclassified(vocab):
    assert flag_for_review(_record("x"), [], UNCLASSIFIED) == "flagged"
    assert flag_reasons([], UNCLASSIFIED) == ["unclassified"]


# ---------------------------------------------------------------------------
# Properties
# ---------------------------------------------------------------------------


def test_total_coverage_on_synthetic_corpus(vocab):
    # Exactly one of: the record has mentions (a meeting, possibly still
    # flagged for review), it is a ceremony, or it is flagged-unclassified.
    corpus = make_corpus(seed=7, n_records=200)
    for record in corpus.records:
        mentions = extract_actors(record.description, corpus.vocab)
        kind = classify_event(record.description, mentions, corpus.vocab)
        status = flag_for_review(record, mentions, kind)
        outcomes = [
            bool(mentions),
            kind == CEREMONY,
            kind == UNCLASSIFIED and status == "flagged",
        ]
        assert sum(outcomes) == 1, (record.description, outcomes)


def test_span_soundness_on_synthetic_corpus():
    corpus = make_corpus(seed=11, n_records=200)
    for record in corpus.records:
        mentions = extract_actors(record.description, corpus.vocab)
        for m in mentions:
            assert record.description[m.span[0] : m.span[1]] == m.surname
        for a, b in zip(mentions, mentions[1:]):
            assert a.span[1] <= b.span[0]


@settings(max_examples=80)
@given(st.text(max_size=120))
def test_extraction_is_deterministic_and_total(text):
    from qnacoder.presets import default_vocabulary

    vocab = default_vocabulary()
    first = extract_actors(text, vocab)
    second = extract_actors(text, vocab)
    assert first == second
    for m in first:
        assert 0 <= m.span[0] < m.span[1] <= len(text)
        assert text[m.span[0] : m.span[1]] == m.surname


def test_stoplist_is_monotone(vocab):
    # Adding an entry can only remove mentions; survivors keep every field.
    texts = [
        ROW1,
        ROW2,
        ROW3,
        "incontro con FAO e NATO",
        "incontro con ISTAT, delegazione",
        "Prof. Carla ISTAT, Presidente dell'istituto",
    ]
    bigger = dataclasses.replace(vocab, org_stoplist=vocab.org_stoplist + ("ISTAT",))
    for text in texts:
        before = {m.surname: m for m in extract_actors(text, vocab)}
        after = {m.surname: m for m in extract_actors(text, bigger)}
        assert set(after) <= set(before)
        for surname, mention in after.items():
            assert mention == before[surname]
