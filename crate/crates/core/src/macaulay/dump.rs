use std::fmt::Write;

use super::{MacaulayReduction, NormalFormField};
use crate::linalg::DenseMatrix;

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn section<C: NormalFormField>(out: &mut String, title: &str, cols: &[String], rows: &[String], m: &DenseMatrix<C>) {
    let _ = writeln!(out, "# {title}");
    let header: Vec<String> = std::iter::once(String::new()).chain(cols.iter().map(|c| csv_cell(c))).collect();
    let _ = writeln!(out, "{}", header.join(","));
    for (i, label) in rows.iter().enumerate() {
        let cells: Vec<String> = std::iter::once(csv_cell(label))
            .chain(m.row(i).iter().map(|v| C::entry_text(v)))
            .collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
}

/// CSV sections `macaulay`, `reduced` and one `M_<var>` per variable, each
/// with a header row of column labels and a label in the first column.
pub fn dump_csv<C: NormalFormField>(r: &MacaulayReduction<C>) -> String {
    let mut out = String::new();
    section(&mut out, "macaulay", &r.macaulay.column_labels(), &r.macaulay.row_labels(), &r.macaulay.matrix);
    out.push('\n');
    section(&mut out, "reduced", &r.reduced.column_labels(), &r.reduced.row_labels(), &r.reduced.matrix);
    let names = r.basis.vars();
    let basis: Vec<String> = r.basis.monomials().iter().map(|b| b.to_text(names)).collect();
    for (k, m) in r.coordinate_matrices.iter().enumerate() {
        let xk = crate::poly::Monomial::var(names.len(), k);
        let cols: Vec<String> = r.basis.monomials().iter().map(|b| xk.mul(b).to_text(names)).collect();
        out.push('\n');
        section(&mut out, &format!("M_{}", names[k]), &cols, &basis, m);
    }
    out
}
