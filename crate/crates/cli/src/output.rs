use std::io::{self, Write};

use autolex::matrix::Pairwise;
use autolex::lexstat::StabilityTable;

pub fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

/// Square matrix with a header row and a label column.
pub fn write_matrix(m: &impl Pairwise, out: impl Write) -> io::Result<()> {
    let mut w = csv_writer(out);
    let labels = m.labels();
    w.write_record(std::iter::once("language").chain(labels.iter().map(String::as_str)))?;
    for (i, label) in labels.iter().enumerate() {
        let row = (0..labels.len()).map(|j| fixed(m.get(i, j)));
        w.write_record(std::iter::once(label.clone()).chain(row))?;
    }
    w.flush()
}

pub fn write_stability(t: &StabilityTable, out: impl Write) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["meaning", "S", "pairs_compared", "rank"])?;
    for r in t.ranked() {
        w.write_record([r.meaning.clone(), fixed(r.stability), r.pairs.to_string(), r.rank.to_string()])?;
    }
    w.flush()
}

/// `n,value` rows without a header, one per grid point.
pub fn write_curve<T: ToString>(points: &[(usize, T)], out: impl Write) -> io::Result<()> {
    let mut w = csv_writer(out);
    for (n, v) in points {
        w.write_record([n.to_string(), v.to_string()])?;
    }
    w.flush()
}
