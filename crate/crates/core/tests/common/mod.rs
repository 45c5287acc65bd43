#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nl2vis::ingest::SourceFormat;
use nl2vis::{infer_metadata, load_dataset, load_dataset_path, Analyzer, Config};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// `(dataset, query)` pairs from the fixture query list.
pub fn fixture_queries() -> Vec<(String, String)> {
    let text = std::fs::read_to_string(fixtures_dir().join("queries.tsv")).expect("queries.tsv");
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (ds, q) = l.split_once('\t').expect("dataset<TAB>query");
            (ds.to_string(), q.to_string())
        })
        .collect()
}

pub fn analyzer_with(dataset: &str, config: Config) -> Analyzer {
    let path = fixtures_dir().join(format!("{dataset}.csv"));
    let profile = infer_metadata(load_dataset_path(&path, None).expect("fixture loads")).expect("profile");
    Analyzer::new(profile, config).expect("analyzer").with_data_name(dataset)
}

pub fn analyzer(dataset: &str) -> Analyzer {
    analyzer_with(dataset, Config::default())
}

/// One analyzer per fixture dataset, built on first use.
#[derive(Default)]
pub struct Analyzers {
    config: Option<Config>,
    cache: HashMap<String, Analyzer>,
}

impl Analyzers {
    pub fn with_config(config: Config) -> Self {
        Self {
            config: Some(config),
            cache: HashMap::new(),
        }
    }

    pub fn get(&mut self, dataset: &str) -> &Analyzer {
        let config = self.config.clone().unwrap_or_default();
        self.cache
            .entry(dataset.to_string())
            .or_insert_with(|| analyzer_with(dataset, config))
    }
}

/// A toy hypernym DAG in WordNet data/index file format. Synset `i` has
/// lemma `toy<letters>`; two roots, mostly tree-shaped with some synsets
/// given a second parent.
pub struct ToyGraph {
    pub parents: Vec<Vec<usize>>,
    pub lemmas: Vec<String>,
}

fn letters(mut i: usize) -> String {
    // Lemmas avoid digits and plural-looking endings so lookups stay literal.
    let mut s = String::new();
    loop {
        s.push((b'a' + (i % 20) as u8) as char);
        i /= 20;
        if i == 0 {
            break;
        }
    }
    format!("toy{s}k")
}

impl ToyGraph {
    pub fn generate(size: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut parents = vec![Vec::new(); size];
        for (i, ps) in parents.iter_mut().enumerate().skip(2) {
            ps.push(rng.random_range(0..i));
            if rng.random_bool(0.2) {
                let second = rng.random_range(0..i);
                if !ps.contains(&second) {
                    ps.push(second);
                }
            }
        }
        let lemmas = (0..size).map(letters).collect();
        Self { parents, lemmas }
    }

    pub fn offset(i: usize) -> usize {
        1000 + i * 100
    }

    pub fn write(&self, dir: &Path) {
        let mut data = String::from("  toy header line\n");
        for (i, ps) in self.parents.iter().enumerate() {
            write!(data, "{:08} 03 n 01 {} 0 {:03}", Self::offset(i), self.lemmas[i], ps.len()).unwrap();
            for p in ps {
                write!(data, " @ {:08} n 0000", Self::offset(*p)).unwrap();
            }
            writeln!(data, " | toy synset {i}").unwrap();
        }
        let mut index = String::from("  toy header line\n");
        let mut sorted: Vec<(usize, &String)> = self.lemmas.iter().enumerate().collect();
        sorted.sort_by(|a, b| a.1.cmp(b.1));
        for (i, lemma) in sorted {
            writeln!(index, "{lemma} n 1 1 @ 1 0 {:08}", Self::offset(i)).unwrap();
        }
        std::fs::write(dir.join("data.noun"), data).unwrap();
        std::fs::write(dir.join("index.noun"), index).unwrap();
    }

    /// Every upward path from `i` to a root, by exhaustive recursion.
    fn paths(&self, i: usize) -> Vec<Vec<usize>> {
        if self.parents[i].is_empty() {
            return vec![vec![i]];
        }
        let mut out = Vec::new();
        for &p in &self.parents[i] {
            for mut path in self.paths(p) {
                path.insert(0, i);
                out.push(path);
            }
        }
        out
    }

    /// Shortest distance from `i` up to each ancestor, read off the full path list.
    fn ancestor_distances(&self, i: usize) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for path in self.paths(i) {
            for (d, node) in path.iter().enumerate() {
                let e = out.entry(*node).or_insert(d);
                *e = (*e).min(d);
            }
        }
        out
    }

    /// Roots have depth 1; otherwise one more than the shortest path to a root.
    pub fn depth(&self, i: usize) -> usize {
        self.paths(i).iter().map(Vec::len).min().unwrap()
    }

    /// Wu-Palmer by brute force: the best common subsumer over every shared ancestor.
    pub fn wup_oracle(&self, a: usize, b: usize) -> f64 {
        let da = self.ancestor_distances(a);
        let db = self.ancestor_distances(b);
        let mut best = 0.0f64;
        for (c, x) in &da {
            if let Some(y) = db.get(c) {
                let two_d = 2.0 * self.depth(*c) as f64;
                best = best.max(two_d / (two_d + *x as f64 + *y as f64));
            }
        }
        best
    }

    /// Whether every node on the way up from `i` has a single parent.
    pub fn tree_like(&self, i: usize) -> bool {
        self.paths(i).len() == 1
    }

    /// Deepest common node of the unique root paths of two tree-like synsets.
    pub fn tree_lcs(&self, a: usize, b: usize) -> Option<usize> {
        let pa = &self.paths(a)[0];
        let pb = &self.paths(b)[0];
        pa.iter().find(|n| pb.contains(n)).copied()
    }
}

const REGIONS: &[&str] = &["North", "South", "East", "West", "Central"];
const STORE_TYPES: &[&str] = &["Outlet", "Flagship", "Kiosk", "Warehouse"];
const CATEGORIES: &[&str] = &["Furniture", "Office Supplies", "Technology", "Apparel", "Grocery", "Toys"];
const PAYMENTS: &[&str] = &["Cash", "Credit Card", "Debit Card", "Voucher"];
const SEGMENTS: &[&str] = &["Consumer", "Corporate", "Home Office", "Small Business"];
const CHANNELS: &[&str] = &["Online", "In Store", "Phone"];
const SUPPLIERS: &[&str] = &["Acme", "Globex", "Initech", "Umbrella", "Stark", "Wayne", "Hooli"];
const COUNTRIES: &[&str] = &["Canada", "Mexico", "France", "Germany", "Japan", "Brazil", "India", "Kenya"];
const CITIES: &[&str] = &[
    "Toronto", "Lyon", "Osaka", "Recife", "Pune", "Nairobi", "Leipzig", "Monterrey", "Calgary", "Nagoya",
];
const PRIORITIES: &[&str] = &["Low", "Medium", "High", "Critical"];
const WORDS: &[&str] = &["Ultra", "Classic", "Smart", "Eco", "Pro", "Mini", "Max", "Prime", "Lite", "Plus"];
const NOUNS: &[&str] = &["Desk", "Lamp", "Chair", "Router", "Jacket", "Kettle", "Puzzle", "Monitor", "Shelf"];

/// A seeded 6000 × 27 sales table for timing the pipeline.
pub fn latency_dataset() -> Analyzer {
    let mut rng = ChaCha8Rng::seed_from_u64(20_201_015);
    let header = [
        "Order ID",
        "Order Date",
        "Ship Date",
        "Region",
        "Store Type",
        "Product Category",
        "Product Name",
        "Payment Method",
        "Customer Segment",
        "Sales Channel",
        "Supplier",
        "Country",
        "City",
        "Priority",
        "Revenue",
        "Profit",
        "Units Sold",
        "Unit Price",
        "Discount",
        "Shipping Cost",
        "Customer Age",
        "Satisfaction Score",
        "Delivery Days",
        "Return Rate",
        "Marketing Spend",
        "Web Visits",
        "Employee Count",
    ];
    assert_eq!(header.len(), 27);
    let mut csv = header.join(",");
    csv.push('\n');
    for row in 0..6000 {
        let month = rng.random_range(1..=12);
        let day = rng.random_range(1..=28);
        let year = rng.random_range(2015..=2023);
        let units: u32 = rng.random_range(1..200);
        let price: f64 = rng.random_range(2.0..900.0);
        let revenue = units as f64 * price;
        let fields = [
            format!("ORD-{row:05}"),
            format!("{year}-{month:02}-{day:02}"),
            format!("{year}-{month:02}-{:02}", (day + 3).min(28)),
            REGIONS.choose(&mut rng).unwrap().to_string(),
            STORE_TYPES.choose(&mut rng).unwrap().to_string(),
            CATEGORIES.choose(&mut rng).unwrap().to_string(),
            format!("{} {}", WORDS.choose(&mut rng).unwrap(), NOUNS.choose(&mut rng).unwrap()),
            PAYMENTS.choose(&mut rng).unwrap().to_string(),
            SEGMENTS.choose(&mut rng).unwrap().to_string(),
            CHANNELS.choose(&mut rng).unwrap().to_string(),
            SUPPLIERS.choose(&mut rng).unwrap().to_string(),
            COUNTRIES.choose(&mut rng).unwrap().to_string(),
            CITIES.choose(&mut rng).unwrap().to_string(),
            PRIORITIES.choose(&mut rng).unwrap().to_string(),
            format!("{revenue:.2}"),
            format!("{:.2}", revenue * rng.random_range(-0.2..0.4)),
            units.to_string(),
            format!("{price:.2}"),
            format!("{:.2}", rng.random_range(0.0..0.5)),
            format!("{:.2}", rng.random_range(1.0..80.0)),
            rng.random_range(18..90).to_string(),
            format!("{:.1}", rng.random_range(1.0..10.0)),
            rng.random_range(1..30).to_string(),
            format!("{:.3}", rng.random_range(0.0..0.3)),
            format!("{:.0}", rng.random_range(100.0..50_000.0)),
            rng.random_range(10..100_000).to_string(),
            rng.random_range(3..500).to_string(),
        ];
        csv.push_str(&fields.join(","));
        csv.push('\n');
    }
    let dataset = load_dataset(csv.as_bytes(), SourceFormat::Csv).expect("generated csv loads");
    let profile = infer_metadata(dataset).expect("generated profile");
    Analyzer::new(profile, Config::default()).expect("analyzer").with_data_name("sales")
}

pub const LATENCY_QUERIES: &[&str] = &[
    "Show the relationship between revenue and profit for online sales in Germany and Japan",
    "Average profit by region",
    "Show the distribution of customer age",
    "Histogram of unit price",
    "Total revenue by product category for corporate customers",
    "Show revenue over time",
    "Correlate marketing spend and web visits",
    "Show units sold for furniture with discount over 0.2",
    "Compare shipping cost and delivery days by sales channel",
    "Show satisfaction score for orders from Toronto and Osaka",
    "Bar chart of average revenue by store type",
    "Show profit trend over the years for technology",
    "Scatterplot of revenue and units sold",
    "Which suppliers have the highest return rate",
    "Show the number of orders per payment method",
    "Box plot of profit by customer segment",
    "Show employee count and revenue for flagship stores",
    "Pie chart of revenue by region",
    "Show orders with priority high or critical",
    "Show discount between 0.1 and 0.3",
    "Heatmap of unit price and discount",
    "Show the average delivery days across countries",
    "Show revenue and profit",
    "Show me the sales",
    "Visualize satisfaction and age",
    "Line chart of marketing spend by order date",
    "Show web visits for kiosk stores in the west region",
    "Show revenue for cash and voucher payments",
    "Average shipping cost by priority",
    "Show profit under 100 for apparel and toys",
];
