//! Seeded synthetic datasets for the `verify` command and the test suite.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use sdlist::data::{Column, ColumnKind, ColumnRole, ColumnSchema, Dataset};

fn schema(name: &str, role: ColumnRole, kind: ColumnKind) -> ColumnSchema {
    ColumnSchema {
        name: name.into(),
        role,
        kind,
    }
}

fn nominal_column(dict: &[&str], codes: Vec<u32>) -> Column {
    Column::Nominal {
        dict: dict.iter().map(|s| s.to_string()).collect(),
        codes,
    }
}

/// Standard normal via Box-Muller; keeps the generators free of extra
/// dependencies.
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// A small dataset with binary explanatory variables and a binary target.
/// Roughly half the seeds plant a real association between one feature pair
/// and the target; the rest are pure noise.
pub fn small_binary_dataset(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(60..=200);
    let n_features = rng.gen_range(3..=4);
    let mut columns: Vec<Vec<u32>> = (0..n_features)
        .map(|_| {
            let p = rng.gen_range(0.3..0.7);
            (0..n).map(|_| u32::from(rng.gen_bool(p))).collect()
        })
        .collect();
    let planted = rng.gen_bool(0.5);
    let base = rng.gen_range(0.3..0.7);
    let target: Vec<u32> = (0..n)
        .map(|row| {
            let p = if planted && columns[0][row] == 1 && columns[1][row] == 1 {
                0.95
            } else {
                base
            };
            u32::from(rng.gen_bool(p))
        })
        .collect();

    let mut schemas: Vec<ColumnSchema> = (0..n_features)
        .map(|j| schema(&format!("f{j}"), ColumnRole::Explanatory, ColumnKind::Nominal))
        .collect();
    schemas.push(schema("class", ColumnRole::Target, ColumnKind::Nominal));
    let mut cols: Vec<Column> = columns
        .drain(..)
        .map(|codes| nominal_column(&["no", "yes"], codes))
        .collect();
    cols.push(nominal_column(&["neg", "pos"], target));
    Dataset::new(schemas, cols).unwrap()
}

/// i.i.d. single-marginal data: random binary features, a target drawn from
/// one Bernoulli marginal independent of everything.
pub fn null_nominal_dataset(seed: u64, n: usize, n_features: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let feature_ps: Vec<f64> = (0..n_features).map(|_| rng.gen_range(0.2..0.8)).collect();
    let target_p = rng.gen_range(0.3..0.7);
    let mut schemas: Vec<ColumnSchema> = (0..n_features)
        .map(|j| schema(&format!("f{j}"), ColumnRole::Explanatory, ColumnKind::Nominal))
        .collect();
    schemas.push(schema("class", ColumnRole::Target, ColumnKind::Nominal));
    let mut cols: Vec<Column> = feature_ps
        .iter()
        .map(|&p| {
            nominal_column(
                &["no", "yes"],
                (0..n).map(|_| u32::from(rng.gen_bool(p))).collect(),
            )
        })
        .collect();
    cols.push(nominal_column(
        &["neg", "pos"],
        (0..n).map(|_| u32::from(rng.gen_bool(target_p))).collect(),
    ));
    Dataset::new(schemas, cols).unwrap()
}

/// Ground truth of a planted run: the canonical display form of each
/// planted description.
pub struct PlantedNumeric {
    pub dataset: Dataset,
    pub planted: Vec<String>,
}

/// Numeric-target benchmark: three small disjoint groups, each flagged by
/// its own nominal variable and shifting the target mean by roughly three
/// dataset standard deviations, over a standard-normal background with two
/// numeric noise variables. Group sizes are kept small so that the
/// background stays close enough to the marginal that no fourth subgroup
/// compresses.
pub fn planted_numeric_dataset(seed: u64, n: usize) -> PlantedNumeric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group_size = 8;
    let shift = 3.2;
    let group_sigma = 0.6;

    // rows [0, g) -> group a, [g, 2g) -> group b, [2g, 3g) -> group c
    let mut a = vec![0u32; n];
    let mut b = vec![0u32; n];
    let mut c = vec![0u32; n];
    let mut y = vec![0.0f64; n];
    for row in 0..n {
        let group = match row {
            r if r < group_size => 1,
            r if r < 2 * group_size => 2,
            r if r < 3 * group_size => 3,
            _ => 0,
        };
        match group {
            1 => {
                a[row] = 1;
                y[row] = shift + group_sigma * standard_normal(&mut rng);
            }
            2 => {
                b[row] = 1;
                y[row] = -shift + group_sigma * standard_normal(&mut rng);
            }
            3 => {
                c[row] = 1;
                y[row] = shift + group_sigma * standard_normal(&mut rng);
            }
            _ => y[row] = standard_normal(&mut rng),
        }
    }
    let noise1: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
    let noise2: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();

    let schemas = vec![
        schema("ga", ColumnRole::Explanatory, ColumnKind::Nominal),
        schema("gb", ColumnRole::Explanatory, ColumnKind::Nominal),
        schema("gc", ColumnRole::Explanatory, ColumnKind::Nominal),
        schema("x1", ColumnRole::Explanatory, ColumnKind::Numeric),
        schema("x2", ColumnRole::Explanatory, ColumnKind::Numeric),
        schema("y", ColumnRole::Target, ColumnKind::Numeric),
    ];
    let cols = vec![
        nominal_column(&["bg", "hit"], a),
        nominal_column(&["bg", "hit"], b),
        nominal_column(&["bg", "hit"], c),
        Column::Numeric(noise1),
        Column::Numeric(noise2),
        Column::Numeric(y),
    ];
    let dataset = Dataset::new(schemas, cols).unwrap();
    let planted = vec![
        "ga = hit".to_owned(),
        "gb = hit".to_owned(),
        "gc = hit".to_owned(),
    ];
    PlantedNumeric { dataset, planted }
}

/// 150 rows, four numeric measurements, three balanced classes with
/// class-dependent means; the classic flower-table shape.
pub fn iris_like_dataset(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 150;
    let class_means: [[f64; 4]; 3] = [
        [5.0, 3.4, 1.5, 0.25],
        [5.9, 2.8, 4.3, 1.3],
        [6.6, 3.0, 5.6, 2.0],
    ];
    let spreads = [0.35, 0.35, 0.4, 0.2];
    let mut features: Vec<Vec<f64>> = (0..4).map(|_| Vec::with_capacity(n)).collect();
    let mut target = Vec::with_capacity(n);
    for row in 0..n {
        let class = row % 3;
        target.push(class as u32);
        for j in 0..4 {
            let v = class_means[class][j] + spreads[j] * standard_normal(&mut rng);
            features[j].push((v.max(0.1) * 10.0).round() / 10.0);
        }
    }
    let names = ["sepal-length", "sepal-width", "petal-length", "petal-width"];
    let mut schemas: Vec<ColumnSchema> = names
        .iter()
        .map(|name| schema(name, ColumnRole::Explanatory, ColumnKind::Numeric))
        .collect();
    schemas.push(schema("species", ColumnRole::Target, ColumnKind::Nominal));
    let mut cols: Vec<Column> = features.into_iter().map(Column::Numeric).collect();
    cols.push(nominal_column(&["setosa", "versicolor", "virginica"], target));
    Dataset::new(schemas, cols).unwrap()
}

/// 398 rows shaped like the classic fuel-consumption table: cylinders and
/// origin nominal, the rest numeric, miles-per-gallon target driven by
/// weight and model year plus noise.
pub fn autompg_like_dataset(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 398;
    let cylinder_choices = [0u32, 1, 2]; // "4", "6", "8"
    let mut cylinders = Vec::with_capacity(n);
    let mut displacement = Vec::with_capacity(n);
    let mut horsepower = Vec::with_capacity(n);
    let mut weight = Vec::with_capacity(n);
    let mut acceleration = Vec::with_capacity(n);
    let mut model_year = Vec::with_capacity(n);
    let mut origin = Vec::with_capacity(n);
    let mut mpg = Vec::with_capacity(n);
    for _ in 0..n {
        let cyl = *cylinder_choices.choose(&mut rng).unwrap();
        let base_weight = 2000.0 + 700.0 * cyl as f64;
        let w = base_weight + 300.0 * standard_normal(&mut rng);
        let year = rng.gen_range(70..=82) as f64;
        let disp = 90.0 + 90.0 * cyl as f64 + 20.0 * standard_normal(&mut rng);
        let hp = 50.0 + 40.0 * cyl as f64 + 10.0 * standard_normal(&mut rng);
        let acc = 16.0 - 1.5 * cyl as f64 + standard_normal(&mut rng);
        let fuel = 46.0 - 0.008 * w + 0.6 * (year - 70.0) + 2.0 * standard_normal(&mut rng);
        cylinders.push(cyl);
        displacement.push((disp.max(60.0) * 10.0).round() / 10.0);
        horsepower.push(hp.max(40.0).round());
        weight.push(w.max(1500.0).round());
        acceleration.push((acc.max(8.0) * 10.0).round() / 10.0);
        model_year.push(year);
        origin.push(rng.gen_range(0..3u32));
        mpg.push((fuel.max(5.0) * 10.0).round() / 10.0);
    }
    let schemas = vec![
        schema("cylinders", ColumnRole::Explanatory, ColumnKind::Nominal),
        schema("displacement", ColumnRole::Explanatory, ColumnKind::Numeric),
        schema("horsepower", ColumnRole::Explanatory, ColumnKind::Numeric),
        schema("weight", ColumnRole::Explanatory, ColumnKind::Numeric),
        schema("acceleration", ColumnRole::Explanatory, ColumnKind::Numeric),
        schema("model-year", ColumnRole::Explanatory, ColumnKind::Numeric),
        schema("origin", ColumnRole::Explanatory, ColumnKind::Nominal),
        schema("mpg", ColumnRole::Target, ColumnKind::Numeric),
    ];
    let cols = vec![
        nominal_column(&["4", "6", "8"], cylinders),
        Column::Numeric(displacement),
        Column::Numeric(horsepower),
        Column::Numeric(weight),
        Column::Numeric(acceleration),
        Column::Numeric(model_year),
        nominal_column(&["usa", "europe", "japan"], origin),
        Column::Numeric(mpg),
    ];
    Dataset::new(schemas, cols).unwrap()
}

/// Renders a dataset back to CSV, the inverse of the loader for generated
/// fixtures.
pub fn to_csv(dataset: &Dataset) -> String {
    let names: Vec<&str> = dataset.schema().iter().map(|c| c.name.as_str()).collect();
    let mut out = names.join(",");
    out.push('\n');
    for row in 0..dataset.n() {
        let cells: Vec<String> = (0..dataset.schema().len())
            .map(|col| match dataset.column(col) {
                Column::Nominal { dict, codes } => dict[codes[row] as usize].clone(),
                Column::Numeric(values) => format!("{}", values[row]),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
