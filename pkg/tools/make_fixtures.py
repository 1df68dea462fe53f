"""Generate the bundled fixture corpus: institution list, roster, provider records.

Deterministic (seeded); outputs are committed so the golden export stays
stable. Rerun only when deliberately changing the corpus, then regenerate the
golden with tools/make_golden.py.
"""

from __future__ import annotations

import csv
import json
import random
import shutil
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"

INSTITUTIONS = [
    ("Aristotle University of Thessaloniki", "AUTH"),
    ("National and Kapodistrian University of Athens", "NKUA"),
    ("University of Thessaly", "UThessaly"),
    ("University of Patras", "UPatras"),
    ("University of West Attica", "UNIWA"),
    ("University of Ioannina", "UoI"),
    ("Democritus University of Thrace", "DUTH"),
    ("University of Crete", "UoC"),
    ("National Technical University of Athens", "NTUA"),
    ("International Hellenic University", "IHU"),
    ("University of the Aegean", "UAegean"),
    ("University of the Peloponnese", "UoP"),
    ("University of Western Macedonia", "UoWM"),
    ("Agricultural University of Athens", "AUA"),
    ("Panteion University of Social and Political Sciences", "Panteion"),
    ("University of Piraeus", "UNIPI"),
    ("Ionian University", "IONIO"),
    ("Athens University of Economics and Business", "AUEB"),
    ("University of Macedonia", "UoM"),
    ("Hellenic Mediterranean University", "HMU"),
    ("Technical University of Crete", "TUC"),
    ("Harokopio University of Athens", "HUA"),
    ("Higher School of Pedagogical and Technological Education", "ASPAITE"),
    ("Hellenic Open University", "HOU"),
    ("Athens School of Fine Arts", "ASFA"),
]

# abbreviation -> [(department name, subject area, member count)]
DEPARTMENTS = {
    "AUTH": [
        ("School of Physics", "Physics and Astronomy", 4),
        ("Department of Psychology", "Psychology", 3),
        ("School of Agriculture", "Agricultural and Biological Sciences", 3),
        ("School of Informatics", "Computer Science", 4),
    ],
    "NKUA": [
        ("Department of Physics", "Physics and Astronomy", 4),
        ("School of Medicine", "Medicine", 4),
        ("Department of Dentistry", "Dentistry", 3),
        ("Department of Psychology", "Psychology", 3),
    ],
    "UThessaly": [
        ("Department of Mathematics", "Mathematics", 2),
        ("Department of Biochemistry and Biotechnology", "Biochemistry, Genetics and Molecular Biology", 3),
    ],
    "UPatras": [
        ("Department of Mathematics", "Mathematics", 4),
        ("Department of Chemical Engineering", "Chemical Engineering", 3),
    ],
    "UNIWA": [
        ("Department of Informatics and Computer Engineering", "Computer Science", 3),
    ],
    "UoI": [
        ("Department of Mathematics", "Mathematics", 3),
        ("Department of Chemistry", "Chemistry", 3),
    ],
    "DUTH": [
        ("Department of Physical Education and Sport Science", "Health Professions", 3),
        ("Department of Law", "Social Sciences", 2),
    ],
    "UoC": [
        ("Department of Mathematics", "Mathematics", 4),
        ("Department of Biology", "Biochemistry, Genetics and Molecular Biology", 3),
    ],
    "NTUA": [
        ("School of Applied Mathematical and Physical Sciences", "Multidisciplinary", 4),
        ("School of Chemical Engineering", "Chemical Engineering", 3),
    ],
    "IHU": [
        ("Department of Information and Electronic Engineering", "Computer Science", 3),
    ],
    "UAegean": [
        ("Department of Marine Sciences", "Environmental Science", 3),
    ],
    "UoP": [
        ("Department of Economics", "Economics, Econometrics and Finance", 3),
    ],
    "UoWM": [
        ("Department of Mathematics", "Mathematics", 2),
    ],
    "AUA": [
        ("Department of Crop Science", "Agricultural and Biological Sciences", 3),
    ],
    "Panteion": [
        ("Department of Economic, Regional Development", "Economics, Econometrics and Finance", 3),
    ],
    "UNIPI": [
        ("Department of Banking and Financial Management", "Economics, Econometrics and Finance", 3),
    ],
    "IONIO": [
        ("Department of Informatics", "Computer Science", 3),
    ],
    "AUEB": [
        ("Department of Economics", "Economics, Econometrics and Finance", 3),
        ("Department of Business Administration", "Business, Management and Accounting", 3),
    ],
    "UoM": [
        ("Department of Business Administration", "Business, Management and Accounting", 3),
    ],
    "HMU": [
        ("Department of Nursing", "Nursing", 3),
    ],
    "TUC": [
        ("School of Electrical and Computer Engineering", "Engineering", 3),
    ],
    "HUA": [
        ("Department of Nutrition and Dietetics", "Nursing", 3),
    ],
    "ASPAITE": [
        ("Department of Civil Engineering Educators", "Engineering", 2),
    ],
    "HOU": [
        ("School of Humanities", "Arts and Humanities", 2),
    ],
    "ASFA": [
        ("Department of Fine Arts", "Arts and Humanities", 2),
    ],
}

SURNAMES = [
    "Papadopoulos", "Papadakis", "Georgiou", "Nikolaou", "Ioannou", "Vlachos",
    "Economou", "Makris", "Alexiou", "Stefanou", "Dimitriadis", "Katsaros",
    "Petridis", "Samaras", "Theodorou", "Christou", "Anagnostou", "Spanos",
    "Kotsis", "Doukas", "Floros", "Galanis", "Zervas", "Kanellopoulos",
    "Lambrou", "Mantzaris", "Xanthopoulos", "Oikonomou", "Pallis", "Rallis",
    "Sideris", "Tsiknakis", "Vasileiou", "Zafeiriou", "Argyrou", "Chalkias",
    "Drakos", "Fotiou", "Gavras", "Karagiannis",
]
FIRST_INITIALS = "ABCDEGIKMNPST"
RANKS = [
    "Professor",
    "AssociateProfessor",
    "AssistantProfessor",
    "ProbationaryAssistantProfessor",
    "Lecturer",
]
SOURCES = [
    "Journal of {}",
    "International Review of {}",
    "{} Letters",
    "Annals of {}",
]
DOC_TYPES = ["Article", "Article", "Article", "Conference Paper", "Review"]


def main() -> None:
    rng = random.Random(20170421)
    records_dir = FIXTURES / "records"
    if records_dir.exists():
        shutil.rmtree(records_dir)
    records_dir.mkdir(parents=True)
    FIXTURES.mkdir(exist_ok=True)

    with open(FIXTURES / "institutions.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["abbreviation", "name"])
        for name, abbrev in INSTITUTIONS:
            writer.writerow([abbrev, name])

    inst_name = {abbrev: name for name, abbrev in INSTITUTIONS}
    next_author = 1
    next_doc = 1
    roster_rows = []
    profiles = []
    publications = []
    member_seq = 0

    for _, abbrev in INSTITUTIONS:
        for dept_name, subject, member_count in DEPARTMENTS[abbrev]:
            dept_members = []  # (display_name, [author ids])
            used_names: set[str] = set()
            for index in range(member_count):
                member_seq += 1
                while True:
                    display = (
                        f"{rng.choice(SURNAMES)}, {rng.choice(FIRST_INITIALS)}."
                    )
                    if display not in used_names:
                        used_names.add(display)
                        break
                # Every 7th member ends the campaign without a profile.
                if member_seq % 7 == 0:
                    roster_rows.append([abbrev, dept_name, display, RANKS[index % len(RANKS)], ""])
                    dept_members.append((display, []))
                    continue
                ids = [f"{next_author:04d}"]
                next_author += 1
                if member_seq % 11 == 0:  # split profile awaiting merge
                    ids.append(f"{next_author:04d}")
                    next_author += 1
                roster_rows.append(
                    [
                        abbrev,
                        dept_name,
                        display,
                        RANKS[index % len(RANKS)],
                        "|".join(f"fixture:{i}" for i in ids),
                    ]
                )
                dept_members.append((display, ids))

            # Publications: solo, intra-department co-authored, external co-authors.
            resolved = [m for m in dept_members if m[1]]
            doc_count: dict[str, int] = {}
            for display, ids in resolved:
                for _ in range(rng.randint(0, 4)):
                    authors = [rng.choice(ids)]
                    if len(resolved) > 1 and rng.random() < 0.35:
                        other_display, other_ids = rng.choice(
                            [m for m in resolved if m[0] != display]
                        )
                        authors.append(rng.choice(other_ids))
                    if rng.random() < 0.3:
                        authors.append(f"ext-{rng.randint(1, 500):03d}")
                    year = rng.randint(2015, 2023)
                    publications.append(
                        {
                            "doc_id": f"D{next_doc:05d}",
                            "title": f"Study {next_doc} in {subject}",
                            "year": year,
                            "citation_count": rng.randint(0, 150),
                            "author_ids": [
                                {"provider": "fixture", "value": v} for v in authors
                            ],
                            "source_title": rng.choice(SOURCES).format(subject),
                            "doc_type": rng.choice(DOC_TYPES),
                            "subject_areas": [subject],
                        }
                    )
                    next_doc += 1
                    for value in authors:
                        doc_count[value] = doc_count.get(value, 0) + 1

            for display, ids in resolved:
                surname, _, initial = display.partition(", ")
                for value in ids:
                    profiles.append(
                        {
                            "author_id": {"provider": "fixture", "value": value},
                            "indexed_name": display,
                            "name_variants": [display, f"{surname}, {initial.rstrip('.')}"],
                            "affiliation_history": [inst_name[abbrev]],
                            "document_count": doc_count.get(value, 0),
                            "subject_areas": [subject],
                        }
                    )

    with open(FIXTURES / "roster.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["institution", "department", "member", "rank", "author_ids"])
        writer.writerows(roster_rows)

    for profile in profiles:
        value = profile["author_id"]["value"]
        path = records_dir / f"author_{value}.json"
        path.write_text(
            json.dumps(profile, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
    for pub in publications:
        path = records_dir / f"pub_{pub['doc_id']}.json"
        path.write_text(
            json.dumps(pub, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )

    print(
        f"wrote {len(roster_rows)} roster rows, {len(profiles)} profiles, "
        f"{len(publications)} publications"
    )


if __name__ == "__main__":
    main()
