#!/usr/bin/env python3
"""Regenerates the shipped session fixtures.

Each fixture is a three-group session (clustered, random, dispersed) whose
texts are assembled from small phrase banks. Evaluation scores are integer
Likert values; the best final design of every session sits in group 2 with
the mean recorded in the matching manifest.

    python3 fixtures/generate.py [output_dir]
"""

import json
import random
import sys
from pathlib import Path

SCHEMA_VERSION = 1
DAYS = 10

MAJORS_BALANCED = ["Engineering", "Management"]
MAJORS_MANAGEMENT = ["Management"] * 4 + ["Engineering"]

BACKGROUND_REASONS = {
    "Engineering": [
        "I picked engineering because I like building things that work",
        "engineering lets me solve practical problems with math and code",
        "I have always enjoyed taking machines apart to see how they run",
        "I chose mechanical engineering after a robotics club in high school",
        "electrical engineering combines physics with hands on design",
    ],
    "Management": [
        "I chose management because I enjoy leading teams and projects",
        "business classes showed me how organizations make decisions",
        "I want to start my own company one day",
        "management connects people, money and strategy",
        "marketing and finance courses sparked my interest in business",
    ],
}
SKILLS = [
    "I know Python and Excel", "I am comfortable with statistics", "I can use CAD software",
    "I have experience in sales", "I write for the student newspaper", "I edit videos",
    "I tutor calculus", "I manage social media for a club", "I built a mobile app",
    "I worked as a barista", "I volunteer at a food bank", "I play guitar in a band",
    "I interned at a bank", "I design posters", "I run cross country", "I paint landscapes",
]
INTERESTS = [
    "I hope to work in product design", "my goal is a career in consulting",
    "I am interested in renewable energy", "I would like to work in supply chain",
    "I want to do user research", "I am curious about data science",
    "I enjoy photography on weekends", "I like hiking and camping",
    "I read science fiction", "I coach youth soccer",
]

SLOGAN_OPENERS = ["Think", "Go", "Work", "Create", "Stay", "Move", "Dream", "Live", "Build", "Play"]
SLOGAN_QUALITIES = ["lighter", "faster", "brighter", "smarter", "further", "bolder", "freely",
                    "anywhere", "without limits", "beyond the desk"]
SLOGAN_OBJECTS = ["your ideas", "your day", "the world", "every moment", "your campus",
                  "your next big thing", "the future", "your story", "late night projects"]
SLOGAN_CLAIMS = ["all day battery", "thin and light", "power in your backpack", "a screen that pops",
                 "built for students", "speed you can feel", "quiet and cool", "ready when you are"]

STORY_CHARACTERS = ["a lighthouse keeper", "an old robot", "a nervous student", "a retired pilot",
                    "twin sisters", "a lost dog", "a night nurse", "a street musician", "a young chef"]
STORY_PLACES = ["a flooded city", "a quiet mountain town", "the last train home", "a crowded market",
                "an empty school", "a ship far from shore", "a rooftop garden", "a desert motel"]
STORY_EVENTS = ["finds a letter from the future", "loses the one thing that matters",
                "hears a voice on the radio", "must keep a promise", "discovers a hidden door",
                "meets a stranger with the same name", "wakes up a day too late",
                "has one hour to decide"]
STORY_ENDINGS = ["and learns to let go", "and everything changes", "and nobody believes it",
                 "and the town never forgets", "and finally goes home", "and starts again"]

COMMENTS = ["I like this one", "maybe shorter", "this could work with a picture",
            "building on the last idea", "what about students", "strong opening", "needs a twist"]


def background_text(rng, major):
    parts = [rng.choice(BACKGROUND_REASONS[major])]
    parts += rng.sample(SKILLS, 2)
    parts.append(rng.choice(INTERESTS))
    return ". ".join(parts) + "."


def slogan(rng):
    shape = rng.randrange(3)
    if shape == 0:
        return f"{rng.choice(SLOGAN_OPENERS)} {rng.choice(SLOGAN_QUALITIES)}."
    if shape == 1:
        return f"{rng.choice(SLOGAN_OPENERS)} {rng.choice(SLOGAN_OBJECTS)}, {rng.choice(SLOGAN_CLAIMS)}."
    return (f"{rng.choice(SLOGAN_CLAIMS).capitalize()}: {rng.choice(SLOGAN_OPENERS).lower()} "
            f"{rng.choice(SLOGAN_QUALITIES)} with {rng.choice(SLOGAN_OBJECTS)}.")


def story(rng):
    sentences = [
        f"In {rng.choice(STORY_PLACES)}, {rng.choice(STORY_CHARACTERS)} {rng.choice(STORY_EVENTS)} "
        f"{rng.choice(STORY_ENDINGS)}.",
        f"Later {rng.choice(STORY_CHARACTERS)} {rng.choice(STORY_EVENTS)}.",
    ]
    if rng.random() < 0.5:
        sentences.append(f"It ends in {rng.choice(STORY_PLACES)} {rng.choice(STORY_ENDINGS)}.")
    return " ".join(sentences)


def split_groups(ids, n_groups):
    base, extra = divmod(len(ids), n_groups)
    groups, start = [], 0
    for g in range(n_groups):
        size = base + (1 if g >= n_groups - extra else 0)
        groups.append(ids[start:start + size])
        start += size
    return groups


def ordinary_scores(rng, evaluators, ceiling):
    """Integer Likert scores whose mean stays strictly below `ceiling`."""
    while True:
        centre = rng.choice([2, 3, 3, 4, 4])
        scores = [min(5, max(1, centre + rng.choice([-1, 0, 0, 1]))) for _ in range(evaluators)]
        if sum(scores) / evaluators < ceiling:
            return scores


def build_session(spec):
    rng = random.Random(spec["seed"])
    n = spec["participants"]
    width = len(str(n))
    participants = []
    for i in range(n):
        major = rng.choice(spec["majors"])
        participants.append({
            "id": f"u{i + 1:0{width}d}",
            "major": major,
            "background": background_text(rng, major),
        })

    ids = [p["id"] for p in participants]
    shuffled = ids[:]
    rng.shuffle(shuffled)
    conditions = ["clustered", "random", "dispersed"]
    groups = []
    for g, members in enumerate(split_groups(shuffled, 3)):
        placement = members[:]
        rng.shuffle(placement)
        groups.append({
            "id": g + 1,
            "condition": conditions[g],
            "degree": 4,
            "members": sorted(members),
            "placement": placement,
        })
    group_of = {m: grp["id"] for grp in groups for m in grp["members"]}

    make_text = slogan if spec["task_kind"] == "slogan" else story
    posts = []
    for day in range(1, DAYS + 1):
        for pid in ids:
            if rng.random() > spec["activity"]:
                continue
            for _ in range(1 + (rng.random() < 0.25)):
                text = make_text(rng)
                if rng.random() < 0.2:
                    text = f"{text} {rng.choice(COMMENTS).capitalize()}."
                posts.append({
                    "id": f"{spec['prefix']}-d{day:02d}-{len(posts) + 1:04d}",
                    "participant": pid,
                    "day": day,
                    "text": text,
                    "likes": rng.randrange(6),
                    "comments": rng.randrange(3),
                })

    evaluators = len(spec["best_scores"])
    best_mean = sum(spec["best_scores"]) / evaluators
    finals = []
    for pid in ids:
        for _ in range(rng.choice([2, 3, 3, 3])):
            finals.append({
                "id": f"{spec['prefix']}-final-{len(finals) + 1:03d}",
                "participant": pid,
                "text": make_text(rng),
                "scores": ordinary_scores(rng, evaluators, best_mean),
            })

    group2 = [f for f in finals if group_of[f["participant"]] == 2]
    winner = group2[rng.randrange(len(group2))]
    winner["scores"] = list(spec["best_scores"])

    session = {
        "schema_version": SCHEMA_VERSION,
        "name": spec["name"],
        "task": spec["task"],
        "days": DAYS,
        "participants": participants,
        "groups": groups,
        "posts": posts,
        "final_designs": finals,
    }
    manifest = {
        "fixture": spec["file"],
        "participants": n,
        "group_sizes": [len(g["members"]) for g in groups],
        "posts": len(posts),
        "final_designs": len(finals),
        "evaluators": evaluators,
        "expected_best": {
            "design_id": winner["id"],
            "group": 2,
            "condition": "random",
            "mean_score": round(best_mean, 3),
            "scores": list(spec["best_scores"]),
        },
        "generator": "fixtures/generate.py",
        "seed": spec["seed"],
    }
    return session, manifest


SPECS = [
    {
        "file": "fall2018_session1.json",
        "name": "fall-2018-session-1",
        "task": "Create slogans, taglines or catch phrases for marketing a laptop.",
        "task_kind": "slogan",
        "prefix": "f18",
        "participants": 64,
        "majors": MAJORS_BALANCED,
        "activity": 0.55,
        "best_scores": [5, 5, 5, 4],
        "seed": 2018,
    },
    {
        "file": "spring2019_session1.json",
        "name": "spring-2019-session-1",
        "task": "Create slogans, taglines or catch phrases for marketing a laptop.",
        "task_kind": "slogan",
        "prefix": "s19a",
        "participants": 66,
        "majors": MAJORS_MANAGEMENT,
        "activity": 0.5,
        "best_scores": [5, 5, 4],
        "seed": 2019,
    },
    {
        "file": "spring2019_session2.json",
        "name": "spring-2019-session-2",
        "task": "Write a story or a complete fiction within a word count limit.",
        "task_kind": "story",
        "prefix": "s19b",
        "participants": 74,
        "majors": MAJORS_MANAGEMENT,
        "activity": 0.45,
        "best_scores": [5, 5, 5],
        "seed": 20192,
    },
]


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent
    out_dir.mkdir(parents=True, exist_ok=True)
    for spec in SPECS:
        session, manifest = build_session(spec)
        (out_dir / spec["file"]).write_text(json.dumps(session, indent=2) + "\n")
        stem = spec["file"].removesuffix(".json")
        (out_dir / f"{stem}.manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
