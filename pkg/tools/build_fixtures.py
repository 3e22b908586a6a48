#!/usr/bin/env python3
"""Regenerate the bundled fixture corpora (deterministic output).

Writes JSON/JSONL/SQL assets plus manifest.json (sha256 digests) into
src/suql/fixtures/data/. Run from the repository root:

    python3 tools/build_fixtures.py
"""

from __future__ import annotations

import hashlib
import json
import os
import random

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "suql", "fixtures", "data")


def dump_json(name: str, obj) -> None:
    with open(os.path.join(OUT, name), "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, ensure_ascii=False, sort_keys=True)
        fh.write("\n")


def dump_text(name: str, text: str) -> None:
    with open(os.path.join(OUT, name), "w", encoding="utf-8") as fh:
        fh.write(text)


def dump_jsonl(name: str, records) -> None:
    with open(os.path.join(OUT, name), "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Corpus: table2 — toy Olympic flag-bearer table

TABLE2_DDL = """\
CREATE TABLE "table" (
    "Name" TEXT,
    "Event year" INT,
    "Event year Info" FREE_TEXT[],
    "Season" TEXT,
    "Gender" TEXT,
    "Flag Bearer" TEXT,
    "Flag Bearer Info" FREE_TEXT[]
);
"""

TABLE2_ROWS = [
    {
        "Name": "XXIX",
        "Event year": 2008,
        "Event year Info": ["The XXIX games were held in Beijing in the summer of 2008."],
        "Season": "Summer",
        "Gender": "Male",
        "Flag Bearer": "Zaw Win",
        "Flag Bearer Info": ["Zaw Win was born on 14 March 1975 and competed in shooting."],
    },
    {
        "Name": "XXX",
        "Event year": 2012,
        "Event year Info": ["The XXX games were held in London in 2012."],
        "Season": "Summer",
        "Gender": "Female",
        "Flag Bearer": "Mya Thway",
        "Flag Bearer Info": ["Mya Thway was born on 2 June 1988 and carried the flag at the opening ceremony."],
    },
    {
        "Name": "XXXI",
        "Event year": 2016,
        "Event year Info": ["The XXXI games were held in Rio de Janeiro in 2016."],
        "Season": "Summer",
        "Gender": "Male",
        "Flag Bearer": "Aung Kyaw",
        "Flag Bearer Info": ["Aung Kyaw was born on 19 January 1993 and participated in the Men's 100kg judo event."],
    },
    {
        "Name": "XXII",
        "Event year": 2014,
        "Event year Info": ["The XXII winter games were held in Sochi in 2014."],
        "Season": "Winter",
        "Gender": "Male",
        "Flag Bearer": "Htet Naing",
        "Flag Bearer Info": ["Htet Naing was born on 30 November 1981 and competed in alpine skiing."],
    },
]

TABLE2_QUERIES = [
    "SELECT answer(\"Event year Info\", 'where is this event held?') FROM table WHERE \"Name\" = 'XXXI';",
    "SELECT \"Name\" FROM table WHERE answer(\"Event year Info\", 'is this event held in Rio?') = 'Yes';",
    "SELECT answer(\"Flag Bearer Info\", 'when is this person born?') FROM table WHERE answer(\"Event year Info\", 'is this event held in Rio?') = 'Yes';",
    "SELECT \"Flag Bearer\" FROM table WHERE \"Gender\" = 'Male' AND answer(\"Flag Bearer Info\", 'did this person participate in Men''s 100kg event?') = 'Yes';",
    "SELECT MAX(answer(\"Flag Bearer Info\", 'when is this person born?')::date) FROM table WHERE \"Event year\" IN ('2016', '2012');",
    "SELECT \"Event year\" FROM table ORDER BY answer(\"Flag Bearer Info\", 'when is this person born?')::date DESC LIMIT 1;",
]

TABLE2_RULES = [
    {"question_pattern": "where is this event held", "doc_pattern": "Beijing", "response": "Beijing"},
    {"question_pattern": "where is this event held", "doc_pattern": "London", "response": "London"},
    {"question_pattern": "where is this event held", "doc_pattern": "Rio de Janeiro", "response": "Rio de Janeiro"},
    {"question_pattern": "where is this event held", "doc_pattern": "Sochi", "response": "Sochi"},
    {"question_pattern": "is this event held in Rio", "doc_pattern": "Rio de Janeiro", "response": "Yes"},
    {"question_pattern": "is this event held in Rio", "doc_pattern": ".", "response": "No"},
    {"question_pattern": "when is this person born", "doc_pattern": "14 March 1975", "response": "14 March 1975"},
    {"question_pattern": "when is this person born", "doc_pattern": "2 June 1988", "response": "2 June 1988"},
    {"question_pattern": "when is this person born", "doc_pattern": "19 January 1993", "response": "19 January 1993"},
    {"question_pattern": "when is this person born", "doc_pattern": "30 November 1981", "response": "30 November 1981"},
    {"question_pattern": "100kg", "doc_pattern": "100kg", "response": "Yes"},
    {"question_pattern": "100kg", "doc_pattern": ".", "response": "No"},
    {"question_pattern": "what is the address", "doc_pattern": "Beijing", "response": "503 Peeples Street SW in Atlanta"},
    {"question_pattern": "which city hosted", "doc_pattern": "London", "response": "Johnson City, Tennessee"},
]


def build_table2() -> None:
    dump_text("table2_schema.sql", TABLE2_DDL)
    dump_jsonl("table2_rows.jsonl", TABLE2_ROWS)
    dump_json("table2_queries.json", TABLE2_QUERIES)
    dump_json("table2_rules.json", TABLE2_RULES)


# ---------------------------------------------------------------------------
# Corpus: restaurants — 30 synthetic rows on the 11-column schema

RESTAURANTS_DDL = """\
CREATE TABLE restaurants (
    name TEXT,
    cuisines TEXT[],
    price ENUM('cheap', 'moderate', 'expensive', 'luxury'),
    rating NUMERIC(2,1),
    num_reviews INT,
    address TEXT,
    popular_dishes FREE_TEXT[],
    phone_number TEXT,
    reviews FREE_TEXT[],
    opening_hours TEXT,
    location TEXT
);
"""

CUISINE_DOMAIN = [
    "american", "chinese", "japanese", "italian", "mexican",
    "thai", "coffee & tea", "cafe", "seafood", "steakhouse",
]


def _r(name, cuisines, price, rating, num_reviews, address, dishes, phone, reviews, hours, location):
    return {
        "name": name, "cuisines": cuisines, "price": price, "rating": rating,
        "num_reviews": num_reviews, "address": address, "popular_dishes": dishes,
        "phone_number": phone, "reviews": reviews, "opening_hours": hours,
        "location": location,
    }


RESTAURANT_ROWS = [
    _r("Burguer King", ["american"], "cheap", "3.8", 120, "12 Main St",
       ["flame burger", "curly fries"], "555-0101",
       ["Classic fast food joint with quick service and big portions."],
       "Mon-Sun 10am-11pm", "San Jose"),
    _r("Sakura Sushi", ["japanese"], "moderate", "4.3", 210, "88 Cherry Ave",
       ["dragon roll", "miso soup"], "555-0102",
       ["Fresh fish and attentive staff.", "The rolls are beautifully plated."],
       "Tue-Sun 11am-10pm", "Kansas City"),
    _r("Nami Ramen", ["japanese"], "cheap", "4.1", 95, "5 Noodle Ln",
       ["tonkotsu ramen", "gyoza"], "555-0103",
       ["Rich broth, generous noodles."],
       "Mon-Sat 11am-9pm", "Kansas City"),
    _r("Kaze Teppanyaki", ["japanese"], "expensive", "4.6", 340, "200 Grill Blvd",
       ["hibachi steak", "fried rice"], "555-0104",
       ["The chefs put on a great show.", "Pricey but worth it for occasions."],
       "Wed-Sun 5pm-11pm", "Kansas City"),
    _r("Daily Grind", ["coffee & tea"], "cheap", "4.4", 150, "3 Bean Ct",
       ["cold brew", "almond croissant"], "555-0105",
       ["Best espresso in the neighborhood."],
       "Mon-Sun 6am-4pm", "Seattle"),
    _r("Corner Cafe", ["cafe"], "cheap", "4.0", 80, "77 Corner St",
       ["avocado toast", "latte"], "555-0106",
       ["Cozy spot for a quiet morning."],
       "Mon-Sun 7am-3pm", "Seattle"),
    _r("Capitol Burgers", ["american"], "moderate", "4.2", 260, "1600 Burger Ave",
       ["smash burger", "onion rings"], "555-0107",
       ["Great with kids, very family-friendly staff and a play corner.",
        "The smash burger is a must."],
       "Mon-Sun 11am-10pm", "D.C."),
    _r("Jason's steakhouse", ["steakhouse"], "expensive", "4.5", 410, "9 Prime Cut Rd",
       ["ribeye", "creamed spinach"], "555-0108",
       ["Cozy candle-lit dining room, very romantic.",
        "Steaks cooked perfectly every time."],
       "Mon-Sun 5pm-11pm", "D.C."),
    _r("Pasta Palace", ["italian"], "moderate", "4.3", 190, "41 Olive Way",
       ["pasta carbonara", "tiramisu"], "555-0109",
       ["Handmade pasta that tastes like Rome."],
       "Tue-Sun 12pm-10pm", "Nashville"),
    _r("Golden Dragon", ["chinese"], "cheap", "4.0", 175, "21 Lantern St",
       ["kung pao chicken", "dumplings"], "555-0110",
       ["Surprisingly short wait even on weekends.", "Solid value for money."],
       "Mon-Sun 11am-10pm", "Memphis"),
    _r("Vine & Dine", ["american"], "luxury", "4.8", 520, "1 Vineyard Loop",
       ["tasting menu", "duck confit"], "555-0111",
       ["A destination dinner, worth the drive."],
       "Thu-Sun 6pm-11pm", "Napa, CA"),
    _r("Harvest Table", ["american"], "expensive", "4.6", 320, "14 Orchard Rd",
       ["roasted chicken", "seasonal salad"], "555-0112",
       ["Farm-to-table done right."],
       "Wed-Sun 5pm-10pm", "Napa, CA"),
    _r("Gui's vegan house", ["thai"], "moderate", "4.5", 230, "66 Green St",
       ["jackfruit curry", "mango sticky rice"], "555-0113",
       ["The food quality is outstanding, every dish bursts with flavor.",
        "Service was slow on a busy night."],
       "Mon-Sat 11am-9pm", "Napa, CA"),
    _r("Hop Garden", ["american"], "moderate", "4.1", 140, "30 Barrel Way",
       ["pretzel bites", "wings"], "555-0114",
       ["Happy hour from 4pm to 6pm with half-price drafts."],
       "Mon-Sun 3pm-12am", "Bakersfield"),
    _r("Daigo", ["japanese"], "expensive", "4.7", 380, "8 Omakase Aly",
       ["salmon nigiri", "uni toast"], "555-0115",
       ["Impeccable omakase, the salmon melts."],
       "Tue-Sat 5pm-10pm", "Chicago"),
    _r("Lakeshore Fish Co.", ["seafood"], "moderate", "4.2", 205, "55 Pier Pl",
       ["grilled salmon", "clam chowder"], "555-0116",
       ["The grilled salmon is the star of the menu."],
       "Mon-Sun 11am-9pm", "Chicago"),
    _r("Taqueria Luz", ["mexican"], "cheap", "4.3", 160, "17 Agave St",
       ["al pastor tacos", "horchata"], "555-0117",
       ["Street-style tacos done honestly."],
       "Mon-Sun 10am-10pm", "Austin"),
    _r("Thai Orchid", ["thai"], "moderate", "4.2", 130, "92 Basil Blvd",
       ["pad thai", "green curry"], "555-0118",
       ["Balanced spice and generous portions."],
       "Tue-Sun 11am-9pm", "Portland"),
    _r("Bella Notte", ["italian"], "expensive", "4.4", 290, "3 Trattoria Ter",
       ["osso buco", "panna cotta"], "555-0119",
       ["Old-school service and rich sauces."],
       "Wed-Sun 5pm-11pm", "Boston"),
    _r("Smoke & Oak", ["american"], "moderate", "4.1", 220, "48 Brisket Bnd",
       ["brisket plate", "cornbread"], "555-0120",
       ["The bark on the brisket is perfect."],
       "Thu-Mon 11am-8pm", "Austin"),
    _r("Pho Harbor", ["chinese"], "cheap", "4.0", 110, "26 Broth Ave",
       ["beef pho", "spring rolls"], "555-0121",
       ["Steaming bowls and fast turnover."],
       "Mon-Sun 10am-9pm", "San Jose"),
    _r("El Molcajete", ["mexican"], "moderate", "4.3", 185, "73 Salsa St",
       ["mole poblano", "queso fundido"], "555-0122",
       ["The mole is deep and complex."],
       "Tue-Sun 11am-10pm", "Denver"),
    _r("Brine & Shell", ["seafood"], "expensive", "4.5", 270, "11 Dock Dr",
       ["oyster platter", "lobster roll"], "555-0123",
       ["Oysters shucked to order."],
       "Wed-Sun 4pm-10pm", "Boston"),
    _r("Stonefire Pizza", ["italian"], "cheap", "3.9", 145, "62 Ember Rd",
       ["margherita pizza", "garlic knots"], "555-0124",
       ["Blistered crust from a proper oven."],
       "Mon-Sun 11am-11pm", "Phoenix"),
    _r("Maple Diner", ["american"], "cheap", "3.7", 90, "5 Syrup St",
       ["pancake stack", "hash browns"], "555-0125",
       ["Breakfast served all day, no frills."],
       "Mon-Sun 6am-2pm", "Portland"),
    _r("Jade Pavilion", ["chinese"], "expensive", "4.4", 310, "39 Dynasty Dr",
       ["peking duck", "dan dan noodles"], "555-0126",
       ["Elegant dining with sharp service."],
       "Tue-Sun 5pm-11pm", "San Francisco"),
    _r("Sizzler Prime", ["steakhouse"], "luxury", "4.6", 450, "70 Ranch Rd",
       ["tomahawk steak", "truffle mash"], "555-0127",
       ["Dry-aged cuts carved tableside."],
       "Mon-Sun 5pm-12am", "Las Vegas"),
    _r("Casa Verde", ["mexican"], "cheap", "4.1", 125, "84 Cilantro Ct",
       ["enchiladas verdes", "elote"], "555-0128",
       ["Bright flavors and friendly prices."],
       "Mon-Sun 10am-9pm", "Phoenix"),
    _r("Noodle Junction", ["thai"], "cheap", "4.0", 105, "19 Wok Way",
       ["drunken noodles", "tom yum"], "555-0129",
       ["Fast, fiery, and filling."],
       "Mon-Sat 11am-9pm", "Denver"),
    _r("Bluegrass Bistro", ["american"], "moderate", "4.2", 170, "33 Banjo Blvd",
       ["hot chicken sandwich", "grits"], "555-0130",
       ["Local favorites with a modern twist."],
       "Tue-Sun 11am-10pm", "Nashville"),
]

RESTAURANT_QUERIES = [
    "SELECT address, summary(reviews) FROM restaurants WHERE name ILIKE 'Burguer King';",
    "SELECT *, summary(reviews) FROM restaurants WHERE 'japanese' = ANY (cuisines) AND location = 'Kansas City' AND rating >= 4.0 LIMIT 3;",
    "SELECT name, price FROM restaurants WHERE (name ILIKE 'Sakura Sushi' OR name ILIKE 'Nami Ramen' OR name ILIKE 'Kaze Teppanyaki') AND location = 'Kansas City';",
    "SELECT *, summary(reviews), answer(reviews, 'is this restaurant family-friendly?') FROM restaurants WHERE answer(reviews, 'do you find this restaurant to be family-friendly?') = 'Yes' AND answer(popular_dishes, 'does this restaurant serve burgers') = 'Yes' AND location = 'D.C.' LIMIT 1;",
    "SELECT answer(reviews, 'What is the atmosphere?') FROM restaurants WHERE name ILIKE 'Jason''s steakhouse' AND location = 'D.C.' LIMIT 1;",
    "SELECT *, summary(reviews) FROM restaurants WHERE answer(popular_dishes, 'does this restaurant serve pasta') = 'Yes' AND location = 'Nashville' LIMIT 1;",
    "SELECT *, summary(reviews), answer(reviews, 'what is the wait time?') FROM restaurants WHERE 'chinese' = ANY (cuisines) AND answer(reviews, 'does this restaurant have short wait time?') = 'Yes' LIMIT 1;",
    "SELECT *, summary(reviews) FROM restaurants WHERE rating >= 4.5 AND location = 'Napa, CA' ORDER BY num_reviews DESC LIMIT 1;",
    "SELECT single_review FROM restaurants AS r, unnest(reviews) AS single_review WHERE name ILIKE 'Gui''s vegan house' AND answer(single_review, 'does this review mention good food quality?') = 'Yes' AND r.location = 'Napa, CA' LIMIT 1;",
    "SELECT *, summary(reviews), answer(reviews, 'what is the happy hour here?') FROM restaurants WHERE location = 'Bakersfield' AND answer(reviews, 'does this restaurant have a happy hour?') = 'Yes' LIMIT 1;",
    "SELECT *, summary(reviews) FROM restaurants WHERE answer(popular_dishes, 'does this restaurant serve salmon?') = 'Yes' AND location = 'Chicago' LIMIT 1;",
    "SELECT *, summary(reviews) FROM restaurants WHERE NOT(name = 'Daigo') AND answer(popular_dishes, 'does this restaurant serve salmon?') = 'Yes' AND location = 'Chicago' LIMIT 1;",
]

RESTAURANT_RULES = [
    {"question_pattern": "family-friendly", "doc_pattern": "family-friendly|with kids", "response": "Yes"},
    {"question_pattern": "family-friendly", "doc_pattern": ".", "response": "No"},
    {"question_pattern": "serve burgers", "doc_pattern": "burger", "response": "Yes"},
    {"question_pattern": "serve burgers", "doc_pattern": ".", "response": "No"},
    {"question_pattern": "What is the atmosphere", "doc_pattern": "candle-lit|romantic", "response": "Cozy and romantic"},
    {"question_pattern": "serve pasta", "doc_pattern": "pasta", "response": "Yes"},
    {"question_pattern": "serve pasta", "doc_pattern": ".", "response": "No"},
    {"question_pattern": "what is the wait time", "doc_pattern": "short wait", "response": "Short, usually under ten minutes"},
    {"question_pattern": "short wait time", "doc_pattern": "short wait", "response": "Yes"},
    {"question_pattern": "short wait time", "doc_pattern": ".", "response": "No"},
    {"question_pattern": "good food quality", "doc_pattern": "food quality is outstanding", "response": "Yes"},
    {"question_pattern": "good food quality", "doc_pattern": ".", "response": "No"},
    {"question_pattern": "what is the happy hour", "doc_pattern": "Happy hour from 4pm to 6pm", "response": "Happy hour runs from 4pm to 6pm"},
    {"question_pattern": "have a happy hour", "doc_pattern": "happy hour", "response": "Yes"},
    {"question_pattern": "have a happy hour", "doc_pattern": ".", "response": "No"},
    {"question_pattern": "serve salmon", "doc_pattern": "salmon", "response": "Yes"},
    {"question_pattern": "serve salmon", "doc_pattern": ".", "response": "No"},
    {"question_pattern": "what is the summary of this document", "doc_pattern": ".", "response": "A short summary of the reviews."},
]

RESTAURANT_CLASSIFY = {"coffee": ["coffee & tea", "cafe"]}


def build_restaurants() -> None:
    dump_text("restaurants_schema.sql", RESTAURANTS_DDL)
    dump_json("restaurants_enums.json", {"cuisines": {"name": "cuisines", "values": CUISINE_DOMAIN}})
    dump_jsonl("restaurants_rows.jsonl", RESTAURANT_ROWS)
    dump_json("restaurants_queries.json", RESTAURANT_QUERIES)
    dump_json("restaurants_rules.json", RESTAURANT_RULES)
    dump_json("restaurants_classify.json", RESTAURANT_CLASSIFY)


# ---------------------------------------------------------------------------
# Corpus: stress — 1000 rows for pruning / lazy / scoring checks

STRESS_DDL = """\
CREATE TABLE stress (
    id INT,
    location TEXT,
    name TEXT,
    reviews FREE_TEXT[]
);
"""

STRESS_CITIES = [
    "D.C.", "Austin", "Boston", "Chicago", "Denver",
    "Memphis", "Nashville", "Phoenix", "Portland", "Seattle",
]

STRESS_WORDS = [
    "brisket", "candle", "cedar", "citrus", "copper", "garden", "harbor",
    "lantern", "maple", "marble", "meadow", "orchid", "pepper", "quartz",
    "saffron", "timber", "velvet", "walnut", "willow", "zinnia",
]

STRESS_SPECIAL_ROW = 500

STRESS_QUERIES = {
    "single_filter": "SELECT name FROM stress WHERE location = 'D.C.' AND answer(reviews, 'is parking easy?') = 'Yes' LIMIT 1;",
    "two_constraints": "SELECT name FROM stress WHERE answer(reviews, 'is parking easy?') = 'Yes' AND answer(reviews, 'is the staff friendly?') = 'Yes' LIMIT 1;",
}

STRESS_RULES = [
    {"question_pattern": "parking", "doc_pattern": "zephyrquartz", "response": "Yes"},
    {"question_pattern": "parking", "doc_pattern": ".", "response": "No"},
    {"question_pattern": "staff friendly", "doc_pattern": "zephyrquartz", "response": "Yes"},
    {"question_pattern": "staff friendly", "doc_pattern": ".", "response": "No"},
]


def build_stress() -> None:
    rng = random.Random(20240517)
    rows = []
    for i in range(1000):
        words = rng.sample(STRESS_WORDS, 6)
        reviews = [
            f"The {words[0]} room has {words[1]} accents and a {words[2]} bar.",
            f"Try the {words[3]} special with {words[4]} and {words[5]}.",
        ]
        if i == STRESS_SPECIAL_ROW:
            reviews.append("Plenty of space out front, parking is easy here. zephyrquartz")
        rows.append(
            {
                "id": i,
                "location": STRESS_CITIES[i % len(STRESS_CITIES)],
                "name": f"Venue {i:04d}",
                "reviews": reviews,
            }
        )
    dump_text("stress_schema.sql", STRESS_DDL)
    dump_jsonl("stress_rows.jsonl", rows)
    dump_json("stress_queries.json", STRESS_QUERIES)
    dump_json("stress_rules.json", STRESS_RULES)


# ---------------------------------------------------------------------------
# Corpus: qa12 — batch-evaluation examples over the table2 corpus

QA12_EXAMPLES = [
    {
        "example_id": "qa-01",
        "question": "Where was the XXXI event held?",
        "gold": "Rio de Janeiro",
        "suql": TABLE2_QUERIES[0],
    },
    {
        "example_id": "qa-02",
        "question": "Which event was held in Rio?",
        "gold": "XXXI",
        "suql": TABLE2_QUERIES[1],
    },
    {
        "example_id": "qa-03",
        "question": "When was the flag bearer of the Rio event born?",
        "gold": "19 January 1993",
        "suql": TABLE2_QUERIES[2],
    },
    {
        "example_id": "qa-04",
        "question": "Which male flag bearer participated in the Men's 100kg event?",
        "gold": "Aung Kyaw",
        "suql": TABLE2_QUERIES[3],
    },
    {
        "example_id": "qa-05",
        "question": "What is the latest birth date among the 2016 and 2012 flag bearers?",
        "gold": "1993-01-19",
        "suql": TABLE2_QUERIES[4],
    },
    {
        "example_id": "qa-06",
        "question": "Which event year has the youngest flag bearer?",
        "gold": "2016",
        "suql": TABLE2_QUERIES[5],
    },
    {
        "example_id": "qa-07",
        "question": "What is the address of the venue of the 2008 games?",
        "gold": "503 Peeples Street SW",
        "suql": "SELECT answer(\"Event year Info\", 'what is the address?') FROM table WHERE \"Name\" = 'XXIX';",
    },
    {
        "example_id": "qa-08",
        "question": "Which city hosted the XXX games?",
        "gold": "Johnson City",
        "suql": "SELECT answer(\"Event year Info\", 'which city hosted this event?') FROM table WHERE \"Name\" = 'XXX';",
    },
    {
        "example_id": "qa-09",
        "question": "Where was the most recent summer event held?",
        "gold": "Rio de Janeiro",
        "suql": "SELECT answer(\"Event year Info\", 'where is this event held?') FROM table WHERE \"Name\" = 'XL';",
        "relaxations": [
            "SELECT answer(\"Event year Info\", 'where is this event held?') FROM table WHERE \"Season\" = 'Summer' ORDER BY \"Event year\" DESC LIMIT 1;"
        ],
    },
    {
        "example_id": "qa-10",
        "question": "Who carried the flag in 2012?",
        "gold": "Mya Thway",
        "suql": "SELEC \"Flag Bearer\" FROM table WHERE \"Event year\" = 2012;",
    },
    {
        "example_id": "qa-11",
        "question": "How many summer games are listed?",
        "gold": "3",
        "suql": "SELECT COUNT(*) FROM table WHERE \"Season\" = 'Summer';",
    },
    {
        "example_id": "qa-12",
        "question": "Which season was the 2014 event?",
        "gold": "Winter",
        "suql": "SELECT \"Season\" FROM table WHERE \"Event year\" = 2014;",
    },
]


def build_qa12() -> None:
    dump_json("qa12_examples.json", QA12_EXAMPLES)


# ---------------------------------------------------------------------------
# Corpus: convo20 — scripted 20-turn conversation over the restaurants corpus

CONVO_CLASSIFIER = {
    "Hi!": False,
    "what is hat yai fried chicken?": False,
    "thanks!": False,
    "bye!": False,
    "good evening!": False,
    "thank you, that's all.": False,
}

CONVO_PARSER = {
    "show me japanese restaurants in Kansas City": [
        "SELECT name, rating, address FROM restaurants WHERE 'japanese' = ANY(cuisines) AND location = 'Kansas City' LIMIT 3;",
    ],
    "What are their prices?": [
        "SELECT name, price FROM restaurants WHERE (name ILIKE 'Sakura Sushi' OR name ILIKE 'Nami Ramen' OR name ILIKE 'Kaze Teppanyaki') AND location = 'Kansas City';",
    ],
    "Where is Burguer King?": [
        "SELECT name, address FROM restaurants WHERE name ILIKE 'Burguer King' LIMIT 1;",
    ],
    "any family-friendly burger places in D.C.?": [
        "SELECT name, rating, address FROM restaurants WHERE answer(reviews, 'do you find this restaurant to be family-friendly?') = 'Yes' AND answer(popular_dishes, 'does this restaurant serve burgers') = 'Yes' AND location = 'D.C.' LIMIT 1;",
    ],
    "show me luxury restaurants in Antarctica": [
        "SELECT name, rating FROM restaurants WHERE price = 'luxury' AND location = 'Antarctica' LIMIT 3;",
    ],
    "anything cheap in Springfield?": [
        "SELECT name, rating FROM restaurants WHERE price = 'cheap' AND location = 'Springfield' LIMIT 3;",
        "SELECT name, rating FROM restaurants WHERE price = 'cheap' AND location = 'Phoenix' LIMIT 3;",
    ],
    "where can I get pasta in Nashville?": [
        "SELECT name, address FROM restaurants WHERE answer(popular_dishes, 'does this restaurant serve pasta') = 'Yes' AND location = 'Nashville' LIMIT 1;",
    ],
    "any good coffee places?": [
        "SELECT name, rating, address FROM restaurants WHERE 'coffee' = ANY(cuisines) LIMIT 3;",
    ],
    "what's the atmosphere like at Jason's steakhouse?": [
        "SELECT answer(reviews, 'What is the atmosphere?') FROM restaurants WHERE name ILIKE 'Jason''s steakhouse' AND location = 'D.C.' LIMIT 1;",
    ],
    "top rated spot in Napa, CA?": [
        "SELECT name, rating, num_reviews FROM restaurants WHERE rating >= 4.5 AND location = 'Napa, CA' ORDER BY num_reviews DESC LIMIT 1;",
    ],
    "does anywhere in Bakersfield do happy hour?": [
        "SELECT name, address FROM restaurants WHERE location = 'Bakersfield' AND answer(reviews, 'does this restaurant have a happy hour?') = 'Yes' LIMIT 1;",
    ],
    "salmon in Chicago, but not Daigo": [
        "SELECT name, rating FROM restaurants WHERE NOT(name = 'Daigo') AND answer(popular_dishes, 'does this restaurant serve salmon?') = 'Yes' AND location = 'Chicago' LIMIT 1;",
    ],
    "find me thai food in Juneau": [
        "SELECT name, rating FROM restaurants WHERE 'thai' = ANY(cuisines) AND location = 'Juneau' LIMIT 3;",
    ],
    "mexican places in Austin?": [
        "SELECT name, rating, address FROM restaurants WHERE 'mexican' = ANY(cuisines) AND location = 'Austin' LIMIT 3;",
    ],
}

CONVO_TURNS = [
    {"utterance": "Hi!", "kind": "smalltalk"},
    {"utterance": "what is hat yai fried chicken?", "kind": "smalltalk"},
    {"utterance": "show me japanese restaurants in Kansas City", "kind": "search"},
    {"utterance": "What are their prices?", "kind": "search"},
    {"utterance": "Where is Burguer King?", "kind": "search"},
    {"utterance": "thanks!", "kind": "smalltalk"},
    {"utterance": "any family-friendly burger places in D.C.?", "kind": "search"},
    {"utterance": "show me luxury restaurants in Antarctica", "kind": "no_result"},
    {"utterance": "anything cheap in Springfield?", "kind": "search_retry"},
    {"utterance": "good evening!", "kind": "smalltalk"},
    {"utterance": "where can I get pasta in Nashville?", "kind": "search"},
    {"utterance": "any good coffee places?", "kind": "search"},
    {"utterance": "what's the atmosphere like at Jason's steakhouse?", "kind": "search"},
    {"utterance": "top rated spot in Napa, CA?", "kind": "search"},
    {"utterance": "does anywhere in Bakersfield do happy hour?", "kind": "search"},
    {"utterance": "salmon in Chicago, but not Daigo", "kind": "search"},
    {"utterance": "find me thai food in Juneau", "kind": "no_result"},
    {"utterance": "mexican places in Austin?", "kind": "search"},
    {"utterance": "tell me a joke", "kind": "parse_failure"},
    {"utterance": "bye!", "kind": "smalltalk"},
]


def build_convo20() -> None:
    dump_json(
        "convo20_script.json",
        {"classifier": CONVO_CLASSIFIER, "parser": CONVO_PARSER, "turns": CONVO_TURNS},
    )


# ---------------------------------------------------------------------------

PROVENANCE = {
    "table2": "toy Olympic flag-bearer table exercising every query shape in the bundled query corpus",
    "restaurants": "synthetic 30-row restaurant database on the 11-column demo schema",
    "stress": "1000-row synthetic table for pruning, lazy-evaluation, and scoring checks",
    "qa12": "12-example QA batch with hand-verified metric values",
    "convo20": "20-turn scripted conversation exercising the agent contracts",
}

CORPUS_FILES = {
    "table2": ["table2_schema.sql", "table2_rows.jsonl", "table2_queries.json", "table2_rules.json"],
    "restaurants": [
        "restaurants_schema.sql", "restaurants_enums.json", "restaurants_rows.jsonl",
        "restaurants_queries.json", "restaurants_rules.json", "restaurants_classify.json",
    ],
    "stress": ["stress_schema.sql", "stress_rows.jsonl", "stress_queries.json", "stress_rules.json"],
    "qa12": ["qa12_examples.json"],
    "convo20": ["convo20_script.json"],
}


def build_manifest() -> None:
    manifest = {"corpora": {}}
    for corpus, files in CORPUS_FILES.items():
        digests = {}
        for name in files:
            with open(os.path.join(OUT, name), "rb") as fh:
                digests[name] = hashlib.sha256(fh.read()).hexdigest()
        manifest["corpora"][corpus] = {"files": digests, "note": PROVENANCE[corpus]}
    dump_json("manifest.json", manifest)


def main() -> None:
    os.makedirs(OUT, exist_ok=True)
    build_table2()
    build_restaurants()
    build_stress()
    build_qa12()
    build_convo20()
    build_manifest()
    print(f"fixtures written to {os.path.abspath(OUT)}")


if __name__ == "__main__":
    main()
