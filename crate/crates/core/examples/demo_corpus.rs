//! Regenerates the bundled demo corpus.
//!
//! ```text
//! cargo run -p seedlex --example demo_corpus -- demo/corpus
//! ```
//!
//! Output is fixed by the RNG seed, so rerunning reproduces the committed files.

use std::path::PathBuf;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DOCUMENTS: usize = 160;
const SENTENCES_PER_DOC: std::ops::Range<usize> = 12..18;

struct Category {
    nouns: &'static [&'static str],
    verbs: &'static [&'static str],
    adjectives: &'static [&'static str],
}

const WEAPON: Category = Category {
    nouns: &[
        "rifles",
        "guns",
        "bombs",
        "grenades",
        "dynamite",
        "explosives",
        "mortars",
        "pistols",
        "machineguns",
        "rockets",
        "ammunition",
        "mines",
        "launchers",
        "weapons",
        "arms",
        "M-16",
        "AK-47",
        "carbines",
        "shotguns",
        "rifle",
        "gun",
        "bomb",
        "grenade",
    ],
    verbs: &["seized", "found", "carried", "used", "hid", "bought", "stole", "captured", "fired"],
    adjectives: &["heavy", "small", "automatic", "homemade", "old"],
};

const VEHICLE: Category = Category {
    nouns: &[
        "cars",
        "trucks",
        "jeeps",
        "planes",
        "airplanes",
        "buses",
        "helicopters",
        "vehicles",
        "ambulances",
        "tanks",
        "boats",
        "motorcycles",
        "trains",
        "taxis",
        "vans",
        "aircraft",
        "car",
        "truck",
        "jeep",
        "plane",
        "bus",
        "helicopter",
    ],
    verbs: &["stopped", "burned", "destroyed", "damaged", "abandoned", "drove", "attacked", "stole"],
    adjectives: &["military", "civilian", "armored", "old", "private"],
};

const MILITARY: Category = Category {
    nouns: &[
        "army",
        "soldiers",
        "troops",
        "infantry",
        "commander",
        "battalion",
        "brigade",
        "officers",
        "forces",
        "units",
        "colonel",
        "sergeant",
        "regiment",
        "garrison",
        "platoon",
        "militia",
        "soldier",
        "officer",
        "commanders",
        "paratroopers",
        "marines",
    ],
    verbs: &["deployed", "ordered", "sent", "attacked", "patrolled", "reported", "killed", "captured"],
    adjectives: &["regular", "elite", "local", "national", "special"],
};

const FINANCIAL: Category = Category {
    nouns: &[
        "bank",
        "banking",
        "currency",
        "dollars",
        "money",
        "loans",
        "credit",
        "pesos",
        "debt",
        "investment",
        "budget",
        "inflation",
        "taxes",
        "funds",
        "bonds",
        "cash",
        "payments",
        "dollar",
        "banks",
        "loan",
        "savings",
        "deposits",
    ],
    verbs: &["raised", "cut", "increased", "borrowed", "owed", "paid", "collected", "transferred", "approved"],
    adjectives: &["foreign", "national", "public", "new", "private"],
};

const ENERGY: Category = Category {
    nouns: &[
        "oil",
        "gas",
        "gasoline",
        "fuel",
        "power",
        "electricity",
        "petroleum",
        "energy",
        "pipeline",
        "refinery",
        "plant",
        "towers",
        "substation",
        "generators",
        "dam",
        "coal",
        "kerosene",
        "diesel",
        "pipelines",
        "reserves",
        "propane",
        "power-lines",
    ],
    verbs: &["supplied", "produced", "imported", "exported", "rationed", "sabotaged", "cut", "damaged"],
    adjectives: &["electric", "national", "new", "main", "foreign"],
};

const CATEGORIES: [&Category; 5] = [&WEAPON, &VEHICLE, &MILITARY, &FINANCIAL, &ENERGY];

const PLACES: &[&str] = &[
    "village",
    "town",
    "city",
    "capital",
    "road",
    "house",
    "building",
    "office",
    "embassy",
    "church",
    "school",
    "hospital",
    "street",
    "area",
    "region",
    "province",
    "border",
    "river",
    "bridge",
    "mountains",
    "farm",
    "market",
    "port",
    "airport",
    "highway",
    "district",
];

const PEOPLE: &[&str] = &[
    "government",
    "president",
    "minister",
    "officials",
    "peasants",
    "farmers",
    "families",
    "children",
    "leaders",
    "rebels",
    "terrorists",
    "police",
    "civilians",
    "victims",
    "residents",
    "workers",
    "students",
    "journalists",
    "priests",
    "judges",
    "mayor",
    "members",
    "spokesman",
    "witnesses",
];

const TIMES: &[&str] = &["week", "month", "year", "night", "morning", "weekend", "afternoon", "evening"];

const NARRATIVE_VERBS: &[&str] = &[
    "reported",
    "announced",
    "said",
    "visited",
    "left",
    "arrived",
    "received",
    "met",
    "denied",
    "warned",
    "accused",
    "occupied",
    "invaded",
    "looted",
    "kidnapped",
    "released",
    "reached",
    "claimed",
];

const PREPOSITIONS: &[&str] = &["near", "in", "outside", "behind", "across", "along", "toward", "inside"];

struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    fn pick(&mut self, words: &[&'static str]) -> &'static str {
        words.choose(&mut self.rng).copied().unwrap_or("")
    }

    fn pick_distinct(&mut self, words: &[&'static str], n: usize) -> Vec<&'static str> {
        words.choose_multiple(&mut self.rng, n).copied().collect()
    }

    fn subject(&mut self) -> String {
        match self.rng.random_range(0..4) {
            0 => "they".into(),
            1 => "he".into(),
            2 => format!("the {}", self.pick(PEOPLE)),
            _ => self.pick(PEOPLE).into(),
        }
    }

    fn tail(&mut self) -> String {
        match self.rng.random_range(0..3) {
            0 => format!(" {} the {}", self.pick(PREPOSITIONS), self.pick(PLACES)),
            1 => format!(" last {}", self.pick(TIMES)),
            _ => String::new(),
        }
    }

    /// A sentence that puts members of one category side by side.
    fn category_sentence(&mut self, c: &Category) -> String {
        let verb = self.pick(c.verbs);
        let adj = self.pick(c.adjectives);
        match self.rng.random_range(0..6) {
            0 => {
                let w = self.pick_distinct(c.nouns, 2);
                format!("{} {verb} {} and {}{}.", self.subject(), w[0], w[1], self.tail())
            }
            1 => {
                let w = self.pick_distinct(c.nouns, 3);
                format!("{} {verb} {}, {} and {}{}.", self.subject(), w[0], w[1], w[2], self.tail())
            }
            2 => {
                let w = self.pick_distinct(c.nouns, 2);
                format!("the {}, {adj} {}, was {verb}{}.", w[0], w[1], self.tail())
            }
            3 => {
                let w = self.pick_distinct(c.nouns, 2);
                format!("{} {verb} the {} {}{}.", self.subject(), w[0], w[1], self.tail())
            }
            4 => {
                let w = self.pick_distinct(c.nouns, 4);
                format!("{} {verb} {adj} {}, {}, {} and {}.", self.subject(), w[0], w[1], w[2], w[3])
            }
            _ => {
                let w = self.pick(c.nouns);
                format!("the {} {verb} {adj} {}{}.", self.pick(PEOPLE), w, self.tail())
            }
        }
    }

    /// Two categories in one sentence, as in real reporting.
    fn mixed_sentence(&mut self) -> String {
        let w = self.pick(WEAPON.nouns);
        let v = self.pick(VEHICLE.nouns);
        let m = self.pick(MILITARY.nouns);
        let f = self.pick(FINANCIAL.nouns);
        let e = self.pick(ENERGY.nouns);
        match self.rng.random_range(0..5) {
            0 => format!("the {m} carried {w} in {v}."),
            1 => format!("{v} carrying {w} were stopped {} the {}.", self.pick(PREPOSITIONS), self.pick(PLACES)),
            2 => format!("the price of {e} raised the {f}."),
            3 => format!("the {m} used {v} {} the {}.", self.pick(PREPOSITIONS), self.pick(PLACES)),
            _ => format!("the {} paid {f} for {e}.", self.pick(PEOPLE)),
        }
    }

    fn narrative_sentence(&mut self) -> String {
        let verb = self.pick(NARRATIVE_VERBS);
        match self.rng.random_range(0..4) {
            0 => format!("the {} {verb} the {}{}.", self.pick(PEOPLE), self.pick(PLACES), self.tail()),
            1 => {
                let who = self.pick(PEOPLE);
                format!("{} {verb} the {who} of the {}.", self.subject(), self.pick(PLACES))
            }
            2 => format!(
                "{} {verb} {} the {} last {}.",
                self.subject(),
                self.pick(PREPOSITIONS),
                self.pick(PLACES),
                self.pick(TIMES)
            ),
            _ => {
                let n = self.rng.random_range(2..40);
                format!("{n} {} {verb} the {}.", self.pick(PEOPLE), self.pick(PLACES))
            }
        }
    }

    fn document(&mut self) -> String {
        let focus = self.rng.random_range(0..CATEGORIES.len());
        let n = self.rng.random_range(SENTENCES_PER_DOC);
        let mut sentences = Vec::with_capacity(n);
        for _ in 0..n {
            let s = match self.rng.random_range(0..10) {
                0..=2 => self.category_sentence(CATEGORIES[focus]),
                3 | 4 => {
                    let other = self.rng.random_range(0..CATEGORIES.len());
                    self.category_sentence(CATEGORIES[other])
                }
                5 => self.mixed_sentence(),
                _ => self.narrative_sentence(),
            };
            sentences.push(capitalize(&s));
        }
        let mut text = String::new();
        for (i, s) in sentences.iter().enumerate() {
            text.push_str(s);
            text.push(if i % 5 == 4 { '\n' } else { ' ' });
        }
        text.trim_end().to_string() + "\n"
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next().map_or_else(String::new, |f| f.to_uppercase().chain(c).collect())
}

fn main() -> std::io::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("demo/corpus"), PathBuf::from);
    std::fs::create_dir_all(&out)?;
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(1992) };
    for i in 0..DOCUMENTS {
        std::fs::write(out.join(format!("dev-{i:04}.txt")), g.document())?;
    }
    println!("wrote {DOCUMENTS} documents to {}", out.display());
    Ok(())
}
