#!/usr/bin/env python3
"""Generate the bundled synthetic mini-corpus used by the end-to-end tests.

Produces, under tests/data/synthetic/:
    corpus.jsonl        ~22 short German articles (3 filtered out by design)
    conllu/<id>.conllu  hand-built dependency parses with NER in MISC
    conllu/<id>.spans.tsv  sidecar NER transport for two documents
    codebook_synth.tsv  the category subset used by the planted claims
    seeds.tsv           one seed per planted claim sentence (text-identical)
    gold.csv            deduplicated planted dyads with normalized actors
    gold_sentences.csv  sentence locations of gold claims (confusion eval)
    config.json         pipeline config wired for mock providers

The corpus is engineered so the mock pipeline recovers the gold dyads
exactly: every planted claim sentence contains a cue verb (scores above the
claim threshold), carries a PER/ORG subject of that verb (inside case), is
its own categorization seed (cosine 1.0), and entails its category phrase
more than the negated phrase under the overlap NLI mock. The script
self-verifies all of this, runs the full pipeline into a scratch directory,
and refuses to write anything if predictions and gold differ.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import json
import shutil
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO_ROOT / "src"))

TAU = 0.7
CLAIM_THRESHOLD = 0.1

# ---------------------------------------------------------------------------
# Token specs: (surface, lemma, upos, head, deprel, ner)
# head is "V" (the main verb), 0 (root), or a 1-based index within the part.
# ---------------------------------------------------------------------------

SUBJECTS = {
    "AM": ([("Angela", "Angela", "PROPN", "V", "nsubj", "B-PER"),
            ("Merkel", "Merkel", "PROPN", 1, "flat:name", "I-PER")], "Angela Merkel"),
    "AM_bare": ([("Merkel", "Merkel", "PROPN", "V", "nsubj", "B-PER")], "Angela Merkel"),
    "NR": ([("Norbert", "Norbert", "PROPN", "V", "nsubj", "B-PER"),
            ("Röttgen", "Röttgen", "PROPN", 1, "flat:name", "I-PER")], "Norbert Röttgen"),
    "NR_bare": ([("Röttgen", "Röttgen", "PROPN", "V", "nsubj", "B-PER")], "Norbert Röttgen"),
    "HS": ([("Horst", "Horst", "PROPN", "V", "nsubj", "B-PER"),
            ("Seehofer", "Seehofer", "PROPN", 1, "flat:name", "I-PER")], "Horst Seehofer"),
    "HS_bare": ([("Seehofer", "Seehofer", "PROPN", "V", "nsubj", "B-PER")], "Horst Seehofer"),
    "SG": ([("Sigmar", "Sigmar", "PROPN", "V", "nsubj", "B-PER"),
            ("Gabriel", "Gabriel", "PROPN", 1, "flat:name", "I-PER")], "Sigmar Gabriel"),
    "SG_bare": ([("Gabriel", "Gabriel", "PROPN", "V", "nsubj", "B-PER")], "Sigmar Gabriel"),
    "JT": ([("Jürgen", "Jürgen", "PROPN", "V", "nsubj", "B-PER"),
            ("Trittin", "Trittin", "PROPN", 1, "flat:name", "I-PER")], "Jürgen Trittin"),
    "JT_bare": ([("Trittin", "Trittin", "PROPN", "V", "nsubj", "B-PER")], "Jürgen Trittin"),
    "RK": ([("Renate", "Renate", "PROPN", "V", "nsubj", "B-PER"),
            ("Künast", "Künast", "PROPN", 1, "flat:name", "I-PER")], "Renate Künast"),
    "RK_bare": ([("Künast", "Künast", "PROPN", "V", "nsubj", "B-PER")], "Renate Künast"),
    "WK": ([("Winfried", "Winfried", "PROPN", "V", "nsubj", "B-PER"),
            ("Kretschmann", "Kretschmann", "PROPN", 1, "flat:name", "I-PER")], "Winfried Kretschmann"),
    "WK_bare": ([("Kretschmann", "Kretschmann", "PROPN", "V", "nsubj", "B-PER")], "Winfried Kretschmann"),
    "CR": ([("Claudia", "Claudia", "PROPN", "V", "nsubj", "B-PER"),
            ("Roth", "Roth", "PROPN", 1, "flat:name", "I-PER")], "Claudia Roth"),
    "CR_bare": ([("Roth", "Roth", "PROPN", "V", "nsubj", "B-PER")], "Claudia Roth"),
    "PR": ([("Philipp", "Philipp", "PROPN", "V", "nsubj", "B-PER"),
            ("Rösler", "Rösler", "PROPN", 1, "flat:name", "I-PER")], "Philipp Rösler"),
    "GW": ([("Guido", "Guido", "PROPN", "V", "nsubj", "B-PER"),
            ("Westerwelle", "Westerwelle", "PROPN", 1, "flat:name", "I-PER")], "Guido Westerwelle"),
    "GW_bare": ([("Westerwelle", "Westerwelle", "PROPN", "V", "nsubj", "B-PER")], "Guido Westerwelle"),
    "HK": ([("Hannelore", "Hannelore", "PROPN", "V", "nsubj", "B-PER"),
            ("Kraft", "Kraft", "PROPN", 1, "flat:name", "I-PER")], "Hannelore Kraft"),
    "HK_bare": ([("Kraft", "Kraft", "PROPN", "V", "nsubj", "B-PER")], "Hannelore Kraft"),
    "VK": ([("Volker", "Volker", "PROPN", "V", "nsubj", "B-PER"),
            ("Kauder", "Kauder", "PROPN", 1, "flat:name", "I-PER")], "Volker Kauder"),
    "KL": ([("Karl", "Karl", "PROPN", "V", "nsubj", "B-PER"),
            ("Lauterbach", "Lauterbach", "PROPN", 1, "flat:name", "I-PER")], "Karl Lauterbach"),
    "SPD": ([("Die", "der", "DET", 2, "det", "O"),
             ("SPD", "SPD", "PROPN", "V", "nsubj", "B-ORG")], "SPD"),
    "CDU": ([("Die", "der", "DET", 2, "det", "O"),
             ("CDU", "CDU", "PROPN", "V", "nsubj", "B-ORG")], "CDU"),
    "FDP": ([("Die", "der", "DET", 2, "det", "O"),
             ("FDP", "FDP", "PROPN", "V", "nsubj", "B-ORG")], "FDP"),
    "GP": ([("Greenpeace", "Greenpeace", "PROPN", "V", "nsubj", "B-ORG")], "Greenpeace"),
    "BUND": ([("Der", "der", "DET", 2, "det", "O"),
              ("BUND", "BUND", "PROPN", "V", "nsubj", "B-ORG")], "BUND"),
    "RWE": ([("RWE", "RWE", "PROPN", "V", "nsubj", "B-ORG")], "RWE"),
}

VERBS = {
    "fordert": ("fordert", "fordern"),
    "fordern_pl": ("fordern", "fordern"),
    "verlangt": ("verlangt", "verlangen"),
    "plädiert": ("plädiert", "plädieren"),
    "warnt": ("warnt", "warnen"),
}

OBJECTS = {
    "100_acc": [("den", "der", "DET", 2, "det"), ("Ausstieg", "Ausstieg", "NOUN", "V", "obj"),
                ("aus", "aus", "ADP", 5, "case"), ("der", "der", "DET", 5, "det"),
                ("Atomkraft", "Atomkraft", "NOUN", 2, "nmod")],
    "100_fuer": [("für", "für", "ADP", 3, "case"), ("den", "der", "DET", 3, "det"),
                 ("Ausstieg", "Ausstieg", "NOUN", "V", "obl"),
                 ("aus", "aus", "ADP", 6, "case"), ("der", "der", "DET", 6, "det"),
                 ("Atomkraft", "Atomkraft", "NOUN", 3, "nmod")],
    "100_dat": [("vor", "vor", "ADP", 3, "case"), ("dem", "der", "DET", 3, "det"),
                ("Ausstieg", "Ausstieg", "NOUN", "V", "obl"),
                ("aus", "aus", "ADP", 6, "case"), ("der", "der", "DET", 6, "det"),
                ("Atomkraft", "Atomkraft", "NOUN", 3, "nmod")],
    "101_acc": [("einen", "ein", "DET", 3, "det"), ("schnellen", "schnell", "ADJ", 3, "amod"),
                ("Ausstieg", "Ausstieg", "NOUN", "V", "obj"),
                ("aus", "aus", "ADP", 6, "case"), ("der", "der", "DET", 6, "det"),
                ("Kernenergie", "Kernenergie", "NOUN", 3, "nmod")],
    "101_fuer": [("für", "für", "ADP", 4, "case"), ("einen", "ein", "DET", 4, "det"),
                 ("schnellen", "schnell", "ADJ", 4, "amod"),
                 ("Ausstieg", "Ausstieg", "NOUN", "V", "obl"),
                 ("aus", "aus", "ADP", 7, "case"), ("der", "der", "DET", 7, "det"),
                 ("Kernenergie", "Kernenergie", "NOUN", 4, "nmod")],
    "102_acc": [("den", "der", "DET", 3, "det"), ("sofortigen", "sofortig", "ADJ", 3, "amod"),
                ("Ausstieg", "Ausstieg", "NOUN", "V", "obj"),
                ("aus", "aus", "ADP", 6, "case"), ("der", "der", "DET", 6, "det"),
                ("Atomkraft", "Atomkraft", "NOUN", 3, "nmod")],
    "102_dat": [("vor", "vor", "ADP", 4, "case"), ("einem", "ein", "DET", 4, "det"),
                ("sofortigen", "sofortig", "ADJ", 4, "amod"),
                ("Ausstieg", "Ausstieg", "NOUN", "V", "obl"),
                ("aus", "aus", "ADP", 7, "case"), ("der", "der", "DET", 7, "det"),
                ("Atomkraft", "Atomkraft", "NOUN", 4, "nmod")],
    "105_acc": [("das", "der", "DET", 2, "det"), ("Abschalten", "Abschalten", "NOUN", "V", "obj"),
                ("der", "der", "DET", 4, "det"), ("Altmeiler", "Altmeiler", "NOUN", 2, "nmod")],
    "110_acc": [("ein", "ein", "DET", 2, "det"), ("Moratorium", "Moratorium", "NOUN", "V", "obj"),
                ("für", "für", "ADP", 6, "case"), ("die", "der", "DET", 6, "det"),
                ("alten", "alt", "ADJ", 6, "amod"), ("Reaktoren", "Reaktor", "NOUN", 2, "nmod")],
    "110_acc2": [("ein", "ein", "DET", 2, "det"), ("Moratorium", "Moratorium", "NOUN", "V", "obj"),
                 ("für", "für", "ADP", 6, "case"), ("die", "der", "DET", 6, "det"),
                 ("älteren", "alt", "ADJ", 6, "amod"), ("Reaktoren", "Reaktor", "NOUN", 2, "nmod")],
    "110_dat": [("vor", "vor", "ADP", 3, "case"), ("einem", "ein", "DET", 3, "det"),
                ("Moratorium", "Moratorium", "NOUN", "V", "obl"),
                ("für", "für", "ADP", 7, "case"), ("die", "der", "DET", 7, "det"),
                ("alten", "alt", "ADJ", 7, "amod"), ("Reaktoren", "Reaktor", "NOUN", 3, "nmod")],
    "120_inf": [(",", ",", "PUNCT", "V", "punct"), ("die", "der", "DET", 3, "det"),
                ("Atom-Politik", "Atom-Politik", "NOUN", 8, "obj"),
                ("auf", "auf", "ADP", 6, "case"), ("den", "der", "DET", 6, "det"),
                ("Prüfstand", "Prüfstand", "NOUN", 8, "obl"),
                ("zu", "zu", "PART", 8, "mark"), ("stellen", "stellen", "VERB", "V", "xcomp")],
    "130_acc": [("die", "der", "DET", 2, "det"),
                ("Laufzeitverlängerung", "Laufzeitverlängerung", "NOUN", "V", "obj"),
                ("für", "für", "ADP", 5, "case"), ("alle", "all", "DET", 5, "det"),
                ("Meiler", "Meiler", "NOUN", 2, "nmod")],
    "201_acc": [("eine", "ein", "DET", 2, "det"),
                ("Sicherheitsüberprüfung", "Sicherheitsüberprüfung", "NOUN", "V", "obj"),
                ("aller", "all", "DET", 4, "det"), ("Reaktoren", "Reaktor", "NOUN", 2, "nmod")],
    "202_acc": [("einen", "ein", "DET", 2, "det"), ("Stresstest", "Stresstest", "NOUN", "V", "obj"),
                ("für", "für", "ADP", 5, "case"), ("alle", "all", "DET", 5, "det"),
                ("Atomkraftwerke", "Atomkraftwerk", "NOUN", 2, "nmod")],
    "301_acc": [("die", "der", "DET", 2, "det"), ("Energiewende", "Energiewende", "NOUN", "V", "obj"),
                ("noch", "noch", "ADV", 6, "advmod"), ("in", "in", "ADP", 6, "case"),
                ("diesem", "dieser", "DET", 6, "det"), ("Jahr", "Jahr", "NOUN", "V", "obl")],
    "301_fuer": [("für", "für", "ADP", 3, "case"), ("die", "der", "DET", 3, "det"),
                 ("Energiewende", "Energiewende", "NOUN", "V", "obl"),
                 ("noch", "noch", "ADV", 7, "advmod"), ("in", "in", "ADP", 7, "case"),
                 ("diesem", "dieser", "DET", 7, "det"), ("Jahr", "Jahr", "NOUN", "V", "obl")],
    "301_dat": [("vor", "vor", "ADP", 4, "case"), ("einer", "ein", "DET", 4, "det"),
                ("überstürzten", "überstürzt", "ADJ", 4, "amod"),
                ("Energiewende", "Energiewende", "NOUN", "V", "obl")],
    "302_acc": [("mehr", "mehr", "DET", 2, "det"),
                ("Investition", "Investition", "NOUN", "V", "obj"),
                ("in", "in", "ADP", 5, "case"), ("erneuerbare", "erneuerbar", "ADJ", 5, "amod"),
                ("Energie", "Energie", "NOUN", 2, "nmod")],
    "geld": [("mehr", "mehr", "DET", 2, "det"), ("Geld", "Geld", "NOUN", "V", "obj"),
             ("für", "für", "ADP", 5, "case"), ("die", "der", "DET", 5, "det"),
             ("Krankenhäuser", "Krankenhaus", "NOUN", 2, "nmod")],
}

# full sentences given as absolute (surface, lemma, upos, head, deprel, ner)
FIXED = {
    "L1": [("Die", "der", "DET", 2, "det", "O"), ("Debatte", "Debatte", "NOUN", 9, "nsubj", "O"),
           ("über", "über", "ADP", 5, "case", "O"), ("den", "der", "DET", 5, "det", "O"),
           ("Ausstieg", "Ausstieg", "NOUN", 2, "nmod", "O"), ("aus", "aus", "ADP", 8, "case", "O"),
           ("der", "der", "DET", 8, "det", "O"), ("Atomkraft", "Atomkraft", "NOUN", 5, "nmod", "O"),
           ("geht", "gehen", "VERB", 0, "root", "O"), ("weiter", "weiter", "ADV", 9, "advmod", "O"),
           (".", ".", "PUNCT", 9, "punct", "O")],
    "L2": [("Nach", "nach", "ADP", 3, "case", "O"), ("dem", "der", "DET", 3, "det", "O"),
           ("Unglück", "Unglück", "NOUN", 6, "obl", "O"), ("in", "in", "ADP", 5, "case", "O"),
           ("Japan", "Japan", "PROPN", 3, "nmod", "B-LOC"), ("steht", "stehen", "VERB", 0, "root", "O"),
           ("die", "der", "DET", 8, "det", "O"), ("Atomkraft", "Atomkraft", "NOUN", 6, "nsubj", "O"),
           ("vor", "vor", "ADP", 11, "case", "O"), ("dem", "der", "DET", 11, "det", "O"),
           ("Ausstieg", "Ausstieg", "NOUN", 6, "obl", "O"), (".", ".", "PUNCT", 6, "punct", "O")],
    "L3": [("Der", "der", "DET", 2, "det", "O"), ("Streit", "Streit", "NOUN", 8, "nsubj", "O"),
           ("um", "um", "ADP", 5, "case", "O"), ("die", "der", "DET", 5, "det", "O"),
           ("Laufzeiten", "Laufzeit", "NOUN", 2, "nmod", "O"), ("der", "der", "DET", 7, "det", "O"),
           ("Atomkraftwerke", "Atomkraftwerk", "NOUN", 5, "nmod", "O"),
           ("dauert", "dauern", "VERB", 0, "root", "O"), ("an", "an", "ADP", 8, "compound:prt", "O"),
           (".", ".", "PUNCT", 8, "punct", "O")],
    "L4": [("In", "in", "ADP", 2, "case", "O"), ("Berlin", "Berlin", "PROPN", 3, "obl", "O"),
           ("geht", "gehen", "VERB", 0, "root", "O"), ("es", "es", "PRON", 3, "nsubj", "O"),
           ("erneut", "erneut", "ADV", 3, "advmod", "O"), ("um", "um", "ADP", 8, "case", "O"),
           ("die", "der", "DET", 8, "det", "O"), ("Stilllegung", "Stilllegung", "NOUN", 3, "obl", "O"),
           ("alter", "alt", "ADJ", 10, "amod", "O"),
           ("Atomkraftwerke", "Atomkraftwerk", "NOUN", 8, "nmod", "O"),
           (".", ".", "PUNCT", 3, "punct", "O")],
    "F1": [("Die", "der", "DET", 2, "det", "O"), ("Reaktoren", "Reaktor", "NOUN", 3, "nsubj", "O"),
           ("liefen", "laufen", "VERB", 0, "root", "O"), ("seit", "seit", "ADP", 6, "case", "O"),
           ("vielen", "viel", "ADJ", 6, "amod", "O"), ("Jahren", "Jahr", "NOUN", 3, "obl", "O"),
           (".", ".", "PUNCT", 3, "punct", "O")],
    "F2": [("Die", "der", "DET", 2, "det", "O"), ("Beratungen", "Beratung", "NOUN", 3, "nsubj", "O"),
           ("dauerten", "dauern", "VERB", 0, "root", "O"), ("bis", "bis", "ADP", 7, "case", "O"),
           ("in", "in", "ADP", 7, "case", "O"), ("den", "der", "DET", 7, "det", "O"),
           ("Abend", "Abend", "NOUN", 3, "obl", "O"), (".", ".", "PUNCT", 3, "punct", "O")],
    "F3": [("Eine", "ein", "DET", 2, "det", "O"),
           ("Entscheidung", "Entscheidung", "NOUN", 6, "nsubj:pass", "O"),
           ("wurde", "werden", "AUX", 6, "aux:pass", "O"),
           ("zunächst", "zunächst", "ADV", 6, "advmod", "O"),
           ("nicht", "nicht", "PART", 6, "advmod", "O"),
           ("getroffen", "treffen", "VERB", 0, "root", "O"), (".", ".", "PUNCT", 6, "punct", "O")],
    "F4": [("Der", "der", "DET", 2, "det", "O"), ("Bundesrat", "Bundesrat", "NOUN", 3, "nsubj", "O"),
           ("kam", "kommen", "VERB", 0, "root", "O"), ("am", "an", "ADP", 5, "case", "O"),
           ("Vormittag", "Vormittag", "NOUN", 3, "obl", "O"),
           ("zusammen", "zusammen", "ADP", 3, "compound:prt", "O"), (".", ".", "PUNCT", 3, "punct", "O")],
    "F5": [("Die", "der", "DET", 2, "det", "O"), ("Gespräche", "Gespräch", "NOUN", 6, "nsubj", "O"),
           ("sollen", "sollen", "AUX", 6, "aux", "O"), ("kommende", "kommend", "ADJ", 5, "amod", "O"),
           ("Woche", "Woche", "NOUN", 6, "obl", "O"),
           ("weitergehen", "weitergehen", "VERB", 0, "root", "O"), (".", ".", "PUNCT", 6, "punct", "O")],
    "O1": [("Er", "er", "PRON", 2, "nsubj", "O"), ("sagte", "sagen", "VERB", 0, "root", "O"),
           (",", ",", "PUNCT", 7, "punct", "O"), ("ein", "ein", "DET", 5, "det", "O"),
           ("Moratorium", "Moratorium", "NOUN", 7, "nsubj", "O"), ("sei", "sein", "AUX", 7, "cop", "O"),
           ("überfällig", "überfällig", "ADJ", 2, "ccomp", "O"), (".", ".", "PUNCT", 2, "punct", "O")],
}

CODEBOOK = [
    (100, "Ausstieg"),
    (101, "Ausstieg (schnell)"),
    (102, "Ausstieg (sofort)"),
    (105, "Abschalten der Altmeiler"),
    (110, "Moratorium"),
    (120, "Atom-Politik auf dem Prüfstand"),
    (130, "Laufzeitverlängerung"),
    (201, "Sicherheitsüberprüfung"),
    (202, "Stresstest"),
    (301, "Energiewende"),
    (302, "Investition in erneuerbare Energie"),
    (400, "Verfahren"),
    (999, "other"),
]


def claim(subj, verb, obj, code, polarity):
    return ("claim", subj, verb, obj, code, polarity)


def coord(subj_a, subj_b, verb, obj, code, polarity):
    return ("coord", subj_a, subj_b, verb, obj, code, polarity)


ARTICLES = [
    ("a01", "2011-03-11", "Süddeutsche Zeitung", "Politik", "Kernkraft vor dem Aus",
     ["L1", claim("AM", "fordert", "102_acc", 102, 1),
      claim("HS", "fordert", "130_acc", 130, 1), "F2"]),
    ("a02", "2011-03-12", "Die Welt", "Politik", "Streit über den sofortigen Ausstieg",
     ["L2", claim("JT", "fordert", "102_acc", 102, 1),
      claim("GP", "verlangt", "102_acc", 102, 1),
      claim("AM_bare", "fordert", "102_acc", 102, 1), "F1"]),
    ("a03", "2011-03-13", "Süddeutsche Zeitung", "Wirtschaft", "Moratorium im Gespräch",
     ["L4", claim("SG", "fordert", "110_acc2", 110, 1),
      claim("RWE", "warnt", "102_dat", 102, -1), "F3"]),
    ("a04", "2011-03-14", "Die Welt", "Politik", "Rufe nach einem Moratorium",
     ["L3", claim("AM", "fordert", "110_acc", 110, 1),
      claim("NR", "verlangt", "110_acc", 110, 1),
      claim("SG", "fordert", "110_acc", 110, 1),
      claim("SG_bare", "verlangt", "110_acc2", 110, 1),  # in-article repeat
      "F5"]),
    ("a05", "2011-03-15", "Süddeutsche Zeitung", "Politik", "Opposition erhöht den Druck",
     ["L1", claim("SPD", "fordert", "110_acc", 110, 1),
      claim("RK", "fordert", "110_acc", 110, 1),
      claim("JT_bare", "fordert", "102_acc", 102, 1)]),
    ("a06", "2011-03-15", "Die Welt", "Politik", "Breite Unterstützung für ein Moratorium",
     ["L2", claim("RK_bare", "fordert", "110_acc", 110, 1),  # same-date cross-article repeat
      "O1", "F1"]),
    ("a07", "2011-03-17", "Süddeutsche Zeitung", "Politik", "Sicherheit der Meiler im Fokus",
     ["L4", claim("AM", "fordert", "201_acc", 201, 1),
      claim("NR", "verlangt", "201_acc", 201, 1),
      claim("HS", "fordert", "201_acc", 201, 1),
      claim("FDP", "warnt", "102_dat", 102, -1), "F2"]),
    ("a08", "2011-03-21", "Die Welt", "Politik", "Breite Front für die Sicherheitsprüfung",
     ["L3", claim("SPD", "fordert", "201_acc", 201, 1),
      claim("CDU", "verlangt", "201_acc", 201, 1),
      claim("GW", "fordert", "201_acc", 201, 1),
      claim("RWE", "warnt", "110_dat", 110, -1), "F5"]),
    ("a09", "2011-03-24", "Süddeutsche Zeitung", "Wirtschaft", "Energiewende rückt ins Zentrum",
     ["L1", claim("AM", "fordert", "301_acc", 301, 1),
      coord("NR", "CR", "fordern_pl", "301_acc", 301, 1),
      claim("WK", "plädiert", "301_fuer", 301, 1), "F3"]),
    ("a10", "2011-03-29", "Die Welt", "Politik", "Länder drängen auf die Energiewende",
     ["L2", claim("CR_bare", "fordert", "301_acc", 301, 1),
      claim("SPD", "verlangt", "301_acc", 301, 1),
      claim("VK", "fordert", "302_acc", 302, 1), "F4"]),
    ("a11", "2011-04-05", "Süddeutsche Zeitung", "Politik", "Energiewende gewinnt Unterstützer",
     ["L3", claim("HK", "fordert", "301_acc", 301, 1),
      claim("PR", "verlangt", "301_acc", 301, 1),
      claim("HS_bare", "warnt", "301_dat", 301, -1), "F1"]),
    ("a12", "2011-04-12", "Die Welt", "Politik", "Stresstest für alle Meiler verlangt",
     ["L4", claim("AM", "fordert", "202_acc", 202, 1),
      claim("GW_bare", "verlangt", "202_acc", 202, 1),
      claim("FDP", "fordert", "202_acc", 202, 1), "F2"]),
    ("a13", "2011-04-20", "Süddeutsche Zeitung", "Politik", "Pläne für den Stresstest",
     ["L1", claim("CDU", "fordert", "202_acc", 202, 1),
      claim("JT", "verlangt", "202_acc", 202, 1),
      claim("BUND", "fordert", "202_acc", 202, 1),
      claim("RWE", "fordert", "130_acc", 130, 1), "F5"]),
    ("a14", "2011-05-03", "Süddeutsche Zeitung", "Politik", "Altmeiler endgültig vom Netz",
     ["L2", claim("SG", "fordert", "105_acc", 105, 1),
      claim("RK", "verlangt", "105_acc", 105, 1),
      claim("JT", "fordert", "105_acc", 105, 1), "F3"]),
    ("a15", "2011-05-10", "Die Welt", "Politik", "Druck für die Abschaltung wächst",
     ["L3", claim("GP", "fordert", "105_acc", 105, 1),
      claim("BUND", "verlangt", "105_acc", 105, 1),
      claim("HK_bare", "fordert", "105_acc", 105, 1),
      claim("HS", "warnt", "102_dat", 102, -1), "F4"]),
    ("a16", "2011-05-19", "Süddeutsche Zeitung", "Politik", "Schneller Ausstieg rückt näher",
     ["L1", claim("AM", "fordert", "101_acc", 101, 1),
      claim("NR_bare", "verlangt", "101_acc", 101, 1),
      claim("SG", "plädiert", "101_fuer", 101, 1), "F1"]),
    ("a17", "2011-05-25", "Die Welt", "Politik", "Annäherung in der Ausstiegsfrage",
     ["L4", claim("WK_bare", "fordert", "101_acc", 101, 1),
      claim("SPD", "verlangt", "101_acc", 101, 1),
      claim("CDU", "fordert", "101_acc", 101, 1),
      claim("FDP", "fordert", "301_acc", 301, 1), "F2"]),
    ("a18", "2011-06-06", "Süddeutsche Zeitung", "Politik", "Der Ausstieg wird besiegelt",
     ["L2", claim("AM", "fordert", "100_acc", 100, 1),
      claim("NR", "verlangt", "100_acc", 100, 1),
      claim("SG", "fordert", "100_acc", 100, 1),
      claim("JT", "plädiert", "100_fuer", 100, 1), "F5"]),
    ("a19", "2011-06-21", "Die Welt", "Politik", "Einigung über den Ausstieg",
     ["L3", claim("RK", "fordert", "100_acc", 100, 1),
      claim("SPD", "verlangt", "100_acc", 100, 1),
      claim("GP", "fordert", "100_acc", 100, 1),
      claim("RWE", "warnt", "100_dat", 100, -1),
      claim("CDU", "fordert", "120_inf", 120, 1),
      ("distractor",), "F4"]),
]

SPANS_FILE_DOCS = {"a05", "a14"}

OFF_CORPUS = [
    # excluded by the section filter despite matching the keyword query
    {"id": "a20", "date": "2011-03-16", "newspaper": "Süddeutsche Zeitung",
     "section": "München Lokal", "title": "Protest vor dem Rathaus",
     "text": "Die Debatte über den Ausstieg aus der Atomkraft geht weiter. "
             "Die Beratungen dauerten bis in den Abend."},
    # excluded by the NOT-group ('Bombe' inside a compound-free token)
    {"id": "a21", "date": "2011-04-02", "newspaper": "Die Welt", "section": "Politik",
     "title": "Die Bombe im Kalten Krieg",
     "text": "Die Geschichte der Atomkraft ist auch die Geschichte der Bombe. "
             "Der Plan, alle Reaktoren abschalten zu lassen, scheiterte."},
    # excluded because no first-group keyword occurs
    {"id": "a22", "date": "2011-05-21", "newspaper": "Süddeutsche Zeitung",
     "section": "Wirtschaft", "title": "Kohlekraft unter Druck",
     "text": "Die Debatte über den Ausstieg aus der Kohle geht weiter. "
             "Der Druck auf die ältesten Kohlekraftwerke wächst."},
]


# ---------------------------------------------------------------------------
# Sentence assembly
# ---------------------------------------------------------------------------


def _resolve(parts, verb_form, verb_lemma):
    """parts: (subject_tokens, object_tokens); returns absolute 6-tuples."""
    subj, obj = parts
    verb_idx = len(subj) + 1
    obj_start = verb_idx + 1
    tokens = []
    for i, (surface, lemma, upos, head, deprel, ner) in enumerate(subj, start=1):
        abs_head = verb_idx if head == "V" else head
        tokens.append((surface, lemma, upos, abs_head, deprel, ner))
    tokens.append((verb_form, verb_lemma, "VERB", 0, "root", "O"))
    for i, (surface, lemma, upos, head, deprel) in enumerate(obj, start=1):
        abs_head = verb_idx if head == "V" else obj_start - 1 + head
        tokens.append((surface, lemma, upos, abs_head, deprel, "O"))
    period_head = verb_idx
    tokens.append((".", ".", "PUNCT", period_head, "punct", "O"))
    return tokens


def build_claim_tokens(subj_key, verb_key, obj_key):
    subj_tokens, _ = SUBJECTS[subj_key]
    verb_form, verb_lemma = VERBS[verb_key]
    return _resolve((subj_tokens, OBJECTS[obj_key]), verb_form, verb_lemma)


def build_coord_tokens(subj_a, subj_b, verb_key, obj_key):
    """Two coordinated full-name PER subjects sharing one claim verb."""
    a_tokens, _ = SUBJECTS[subj_a]
    b_tokens, _ = SUBJECTS[subj_b]
    assert len(a_tokens) == 2 and len(b_tokens) == 2, "coordination expects two-token names"
    subj = [
        (a_tokens[0][0], a_tokens[0][1], "PROPN", "V", "nsubj", "B-PER"),
        (a_tokens[1][0], a_tokens[1][1], "PROPN", 1, "flat:name", "I-PER"),
        ("und", "und", "CCONJ", 4, "cc", "O"),
        (b_tokens[0][0], b_tokens[0][1], "PROPN", 1, "conj", "B-PER"),
        (b_tokens[1][0], b_tokens[1][1], "PROPN", 4, "flat:name", "I-PER"),
    ]
    verb_form, verb_lemma = VERBS[verb_key]
    return _resolve((subj, OBJECTS[obj_key]), verb_form, verb_lemma)


def render_text(tokens):
    out = []
    for surface, *_ in tokens:
        if out and surface in {".", ","}:
            out[-1] = out[-1] + surface
        else:
            out.append(surface)
    return " ".join(out)


def sentence_tokens(entry):
    if isinstance(entry, str):
        return FIXED[entry]
    if entry[0] == "claim":
        _, subj, verb, obj, _, _ = entry
        return build_claim_tokens(subj, verb, obj)
    if entry[0] == "coord":
        _, subj_a, subj_b, verb, obj, _, _ = entry
        return build_coord_tokens(subj_a, subj_b, verb, obj)
    if entry[0] == "distractor":
        return build_claim_tokens("KL", "fordert", "geld")
    raise ValueError(entry)


def planted_for(entry):
    """(gold_actor, code, polarity) plants carried by a sentence entry."""
    if isinstance(entry, str) or entry[0] == "distractor":
        return []
    if entry[0] == "claim":
        _, subj, _, _, code, polarity = entry
        return [(SUBJECTS[subj][1], code, polarity)]
    _, subj_a, subj_b, _, _, code, polarity = entry
    return [(SUBJECTS[subj_a][1], code, polarity), (SUBJECTS[subj_b][1], code, polarity)]


def conllu_lines(sentences, use_spans_file):
    """Render sentences to CoNLL-U text (and spans rows when sidecar NER)."""
    lines = []
    spans_rows = []
    for sent_idx, tokens in enumerate(sentences):
        current = None
        for tid, (surface, lemma, upos, head, deprel, ner) in enumerate(tokens, start=1):
            misc = "_" if use_spans_file else f"NER={ner}"
            lines.append(f"{tid}\t{surface}\t{lemma}\t{upos}\t_\t_\t{head}\t{deprel}\t_\t{misc}")
            if use_spans_file:
                if ner.startswith("B-"):
                    if current:
                        spans_rows.append(current)
                    current = [sent_idx, tid, tid, ner[2:]]
                elif ner.startswith("I-") and current and ner[2:] == current[3]:
                    current[2] = tid
                else:
                    if current:
                        spans_rows.append(current)
                    current = None
        if use_spans_file and current:
            spans_rows.append(current)
        lines.append("")
    return "\n".join(lines) + "\n", spans_rows


# ---------------------------------------------------------------------------
# Generation + self-verification
# ---------------------------------------------------------------------------


def generate(out_dir: Path) -> None:
    from claimnet.categorize import Codebook
    from claimnet.claims import MockClaimScorer
    from claimnet.embeddings import cosine, mock_embed
    from claimnet.stance import MockNliScorer, StanceConfig, build_hypotheses, classify_stance

    labels = {code: label for code, label in CODEBOOK}
    codebook = Codebook(labels=labels, excluded=frozenset({400, 999}))

    corpus_records = []
    conllu_files = {}
    spans_files = {}
    seeds = []
    plants = []  # (date, doc_id, sent_idx, actor, code, polarity, text)

    for doc_id, date, paper, section, title, entries in ARTICLES:
        sentences = [sentence_tokens(e) for e in entries]
        texts = [render_text(t) for t in sentences]
        doc_text = " ".join(texts)
        corpus_records.append(
            {"id": doc_id, "date": date, "newspaper": paper, "section": section,
             "title": title, "text": doc_text}
        )
        use_spans = doc_id in SPANS_FILE_DOCS
        conllu, spans_rows = conllu_lines(sentences, use_spans)
        conllu_files[doc_id] = conllu
        if use_spans:
            spans_files[doc_id] = spans_rows
        for sent_idx, entry in enumerate(entries):
            for actor, code, polarity in planted_for(entry):
                plants.append(
                    (dt.date.fromisoformat(date), doc_id, sent_idx, actor, code,
                     polarity, texts[sent_idx])
                )
            if not isinstance(entry, str) and entry[0] in ("claim", "coord"):
                code = entry[4] if entry[0] == "claim" else entry[5]
                seeds.append((code, texts[sent_idx]))

    corpus_records.extend(OFF_CORPUS)
    corpus_records.sort(key=lambda r: r["id"])

    # --- self-checks -------------------------------------------------------
    seed_texts = [t for _, t in seeds]
    assert len(seed_texts) == len(set(seed_texts)), "seed texts must be unique"

    scorer = MockClaimScorer()
    for _, _, _, actor, code, polarity, text in plants:
        (score,) = scorer.score_texts([text])
        assert score >= CLAIM_THRESHOLD, f"claim sentence scored low: {text}"
    for key in ("L1", "L2", "L3", "L4", "F1", "F2", "F3", "F4", "F5"):
        (score,) = scorer.score_texts([render_text(FIXED[key])])
        assert score < CLAIM_THRESHOLD, f"non-claim sentence scored high: {key}"

    seed_vecs = [(code, text, mock_embed(text)) for code, text in seeds]
    for code, text, vec in seed_vecs:
        for other_code, other_text, other_vec in seed_vecs:
            if text != other_text:
                sim = cosine(vec, other_vec)
                assert sim < 0.999, f"near-duplicate seeds: {text!r} vs {other_text!r}"
    distractor_text = render_text(sentence_tokens(("distractor",)))
    distractor_vec = mock_embed(distractor_text)
    worst = max(cosine(distractor_vec, v) for _, _, v in seed_vecs)
    assert worst < TAU - 0.05, f"distractor too close to a seed ({worst:.3f})"

    stance_cfg = StanceConfig()
    nli = MockNliScorer()
    for _, _, _, actor, code, polarity, text in plants:
        pair = build_hypotheses(code, codebook, stance_cfg)
        predicted, margin = classify_stance(text, pair, nli)
        assert predicted == polarity and abs(margin) > 0.01, (
            f"stance mismatch for {text!r}: predicted {predicted}, planted {polarity}"
        )

    # --- gold: first occurrence per (actor, code, date) ---------------------
    plants.sort(key=lambda p: (p[0], p[1], p[2]))
    gold_rows = []
    gold_sentence_rows = []
    seen = {}
    for date, doc_id, sent_idx, actor, code, polarity, _ in plants:
        key = (actor, code, date)
        if key in seen:
            assert seen[key] == polarity, f"conflicting plant for {key}"
            continue
        seen[key] = polarity
        gold_rows.append((doc_id, date.isoformat(), actor, code, polarity))
        gold_sentence_rows.append((doc_id, sent_idx, code))
    gold_sentence_rows = sorted(set(gold_sentence_rows))

    # --- write --------------------------------------------------------------
    out_dir.mkdir(parents=True, exist_ok=True)
    conllu_dir = out_dir / "conllu"
    if conllu_dir.exists():
        shutil.rmtree(conllu_dir)
    conllu_dir.mkdir()

    with open(out_dir / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for rec in corpus_records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    for doc_id, content in sorted(conllu_files.items()):
        (conllu_dir / f"{doc_id}.conllu").write_text(content, encoding="utf-8")
    for doc_id, rows in sorted(spans_files.items()):
        with open(conllu_dir / f"{doc_id}.spans.tsv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
            writer.writerow(["sent_index", "first_token", "last_token", "label"])
            writer.writerows(rows)
    with open(out_dir / "codebook_synth.tsv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerows(CODEBOOK)
    with open(out_dir / "seeds.tsv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerows(sorted(seeds))
    with open(out_dir / "gold.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["article_id", "date", "actor", "category_code", "polarity"])
        writer.writerows(gold_rows)
    with open(out_dir / "gold_sentences.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["article_id", "sentence_index", "category_code"])
        writer.writerows(gold_sentence_rows)

    config = {
        "corpus": "corpus.jsonl",
        "conllu_dir": "conllu",
        "gold": "gold.csv",
        "gold_sentences": "gold_sentences.csv",
        "seeds": "seeds.tsv",
        "codebook": "codebook_synth.tsv",
        "excluded_codes": [400, 999],
        "section_exclude": ["lokal"],
        "output_dir": "out",
        "embedding": {"provider": "mock", "dim": 768},
        "claims": {"scorer": "mock", "threshold": CLAIM_THRESHOLD},
        "categorizer": {"tau": TAU, "pooling": "max"},
        "stance": {"scorer": "mock"},
    }
    (out_dir / "config.json").write_text(
        json.dumps(config, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )

    verify(out_dir, gold_rows)
    print(f"synthetic corpus written to {out_dir}")
    print(f"  articles: {len(corpus_records)} (retained: {len(ARTICLES)})")
    print(f"  planted occurrences: {len(plants)}, gold dyads: {len(gold_rows)}")
    print(f"  seeds: {len(seeds)}")


def verify(out_dir: Path, gold_rows) -> None:
    """Run the full pipeline on the written fixture; predictions must equal gold."""
    from claimnet.config import load_config
    from claimnet.pipeline import load_dyads, run

    with tempfile.TemporaryDirectory() as scratch:
        cfg = load_config(out_dir / "config.json")
        cfg.output_dir = Path(scratch)
        results = run(cfg)
        predicted = {
            (d.actor, d.code, d.date.isoformat(), d.polarity)
            for d in load_dyads(Path(scratch) / "dyads.jsonl")
        }
        expected = {(actor, code, date, pol) for _, date, actor, code, pol in gold_rows}
        missing = expected - predicted
        spurious = predicted - expected
        assert not missing and not spurious, (
            f"pipeline does not reproduce gold; missing={sorted(missing)!r} "
            f"spurious={sorted(spurious)!r}"
        )
        report = json.loads((Path(scratch) / "report.json").read_text(encoding="utf-8"))
        for period in report["periods"]:
            for partition in ("actors", "claims", "dyads"):
                metrics = period[partition]
                assert metrics["precision"] == 1.0 and metrics["recall"] == 1.0, (
                    f"period {period['index']} {partition}: {metrics}"
                )
        assert report["stance"]["accuracy"] == 1.0
        assert results["stance"]["polarity_conflicts"] == 0
        print("  pipeline verification: predictions == gold, all period metrics 1.0")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out", default=str(REPO_ROOT / "tests" / "data" / "synthetic"),
        help="output directory (default: tests/data/synthetic)",
    )
    args = parser.parse_args()
    generate(Path(args.out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
