use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use autolex::chrono::{calibrate, divergence_time, CalibrationPoint};
use autolex::lexstat::{
    correlation_curve, default_grid, full_distance, stability as stability_table, truncated_distance,
    DistanceMatrix, FamilyDataset, StabilityTable, SynonymPolicy,
};
use autolex::phylo::{newick_serialize, rf_curve as rf_points, upgma};
use autolex::synth::{two_rate_family, TwoRateConfig};
use autolex::wordlist::{read_wordlist_file, write_wordlist, WordlistError};

use crate::output::{fixed, write_curve, write_matrix, write_stability};
use crate::{Failure, SynthArgs};

type Outcome = Result<(), Failure>;

const GRID_STEP: usize = 10;

fn load(path: &Path) -> Result<FamilyDataset, Failure> {
    read_wordlist_file(path).map_err(|e| match e {
        WordlistError::Io(io) => Failure::format("read", format!("{}: {io}", path.display())),
        other => Failure::format("parse", format!("{}: {other}", path.display())),
    })
}

fn ranked(ds: &FamilyDataset, policy: SynonymPolicy) -> Result<StabilityTable, Failure> {
    stability_table(ds, policy).map_err(|e| Failure::compute("stability", e))
}

fn stdout_writer() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

fn written(r: io::Result<()>) -> Outcome {
    match r {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => other.map_err(|e| Failure::compute("write", e)),
    }
}

fn check_top_n(n: usize, ds: &FamilyDataset) -> Outcome {
    if n == 0 || n > ds.n_meanings() {
        return Err(Failure::usage(
            "arguments",
            format!("list length {n} outside 1..={}", ds.n_meanings()),
        ));
    }
    Ok(())
}

/// Distances over all meanings or over the `top_n` most stable ones.
fn distance_matrix(
    ds: &FamilyDataset,
    policy: SynonymPolicy,
    top_n: Option<usize>,
) -> Result<DistanceMatrix, Failure> {
    match top_n {
        None => full_distance(ds, policy),
        Some(n) => {
            check_top_n(n, ds)?;
            truncated_distance(ds, &ranked(ds, policy)?, n, policy)
        }
    }
    .map_err(|e| Failure::compute("distances", e))
}

fn parse_selector(s: &str) -> Result<Option<usize>, Failure> {
    if s == "all" {
        return Ok(None);
    }
    s.strip_prefix("top:")
        .and_then(|n| n.parse().ok())
        .map(Some)
        .ok_or_else(|| Failure::usage("arguments", format!("--meanings expects all or top:<n>, got {s:?}")))
}

fn parse_grid(spec: Option<&str>, ds: &FamilyDataset) -> Result<Vec<usize>, Failure> {
    let Some(spec) = spec else {
        return Ok(default_grid(ds.n_meanings(), GRID_STEP));
    };
    let grid = spec
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Failure::usage("arguments", format!("--grid: {v:?} is not a list length")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    for &n in &grid {
        check_top_n(n, ds)?;
    }
    Ok(grid)
}

pub fn distances(path: &Path, policy: SynonymPolicy, meanings: &str) -> Outcome {
    let top_n = parse_selector(meanings)?;
    let ds = load(path)?;
    let m = distance_matrix(&ds, policy, top_n)?;
    written(write_matrix(&m, stdout_writer()))
}

pub fn stability(path: &Path, policy: SynonymPolicy) -> Outcome {
    let ds = load(path)?;
    let t = ranked(&ds, policy)?;
    written(write_stability(&t, stdout_writer()))
}

pub fn correlate(path: &Path, policy: SynonymPolicy, grid: Option<&str>) -> Outcome {
    let ds = load(path)?;
    let grid = parse_grid(grid, &ds)?;
    let t = ranked(&ds, policy)?;
    let curve = correlation_curve(&ds, &t, &grid, policy).map_err(|e| Failure::compute("correlate", e))?;
    let points: Vec<(usize, String)> = curve.into_iter().map(|(n, c)| (n, fixed(c))).collect();
    written(write_curve(&points, stdout_writer()))
}

pub fn rf_curve(path: &Path, policy: SynonymPolicy, grid: Option<&str>) -> Outcome {
    let ds = load(path)?;
    let grid = parse_grid(grid, &ds)?;
    let t = ranked(&ds, policy)?;
    let curve = rf_points(&ds, &t, &grid, policy).map_err(|e| Failure::compute("rf-curve", e))?;
    written(write_curve(&curve, stdout_writer()))
}

fn parse_calibration(spec: &str) -> Result<CalibrationPoint, Failure> {
    let bad = || Failure::usage("arguments", format!("--calibrate expects LANG_A:LANG_B:TIME, got {spec:?}"));
    let (pair, time) = spec.rsplit_once(':').ok_or_else(bad)?;
    let (a, b) = pair.split_once(':').ok_or_else(bad)?;
    let time: f64 = time.parse().map_err(|_| bad())?;
    if a.is_empty() || b.is_empty() {
        return Err(bad());
    }
    Ok(CalibrationPoint::new(a, b, time))
}

pub fn tree(
    path: &Path,
    policy: SynonymPolicy,
    top_n: Option<usize>,
    epsilon: Option<f64>,
    calibration: Option<&str>,
) -> Outcome {
    let calibration = calibration.map(parse_calibration).transpose()?;
    let ds = load(path)?;
    let d = distance_matrix(&ds, policy, top_n)?;
    let rate = match (epsilon, calibration) {
        (Some(e), _) => Some(e),
        (None, Some(p)) => Some(calibrate(&d, &p).map_err(|e| Failure::compute("calibrate", e))?),
        (None, None) => None,
    };
    let tree = match rate {
        None => upgma(&d),
        Some(e) => {
            let times = divergence_time(&d, e).map_err(|e| Failure::compute("times", e))?;
            upgma(&times)
        }
    }
    .map_err(|e| Failure::compute("tree", e))?;
    let mut out = stdout_writer();
    written(writeln!(out, "{}", newick_serialize(&tree)).and_then(|_| out.flush()))
}

pub fn times(path: &Path, policy: SynonymPolicy, epsilon: f64, top_n: Option<usize>) -> Outcome {
    let ds = load(path)?;
    let d = distance_matrix(&ds, policy, top_n)?;
    let t = divergence_time(&d, epsilon).map_err(|e| Failure::compute("times", e))?;
    written(write_matrix(&t, stdout_writer()))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::compute("write", format!("{}: {e}", path.display())))
}

pub fn synth(args: &SynthArgs) -> Outcome {
    let cfg = TwoRateConfig {
        languages: args.languages,
        meanings: args.meanings,
        slow_rate: args.slow,
        fast_rate: args.fast,
        fraction_slow: args.fraction_slow,
        mutation_rate: args.mutation,
        seed: args.seed,
    };
    let fam = two_rate_family(&cfg).map_err(|e| Failure::usage("synth", e))?;
    match &args.output {
        Some(path) => {
            let mut out = create(path)?;
            written(write_wordlist(&fam.dataset, &mut out).and_then(|_| out.flush()))?;
        }
        None => {
            let mut out = stdout_writer();
            written(write_wordlist(&fam.dataset, &mut out).and_then(|_| out.flush()))?;
        }
    }
    if let Some(path) = &args.tree_out {
        let mut out = create(path)?;
        written(writeln!(out, "{}", newick_serialize(&fam.tree)).and_then(|_| out.flush()))?;
    }
    if let Some(path) = &args.rates_out {
        let mut out = create(path)?;
        let rows: Vec<(&String, f64, &str)> = fam
            .dataset
            .meanings()
            .iter()
            .zip(&fam.rates)
            .zip(&fam.slow)
            .map(|((m, &r), &s)| (m, r, if s { "slow" } else { "fast" }))
            .collect();
        let mut body = String::from("meaning,rate,class\n");
        for (m, r, class) in rows {
            body.push_str(&format!("{m},{r},{class}\n"));
        }
        written(out.write_all(body.as_bytes()).and_then(|_| out.flush()))?;
    }
    Ok(())
}
