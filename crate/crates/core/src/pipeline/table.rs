//! The decomposition table as aligned text and as `(dimension, row, count)` records.

use serde_json::{json, Value};

use super::DecompositionReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub dimension: usize,
    pub row: String,
    pub count: usize,
}

impl TableRow {
    pub fn to_json(&self) -> Value {
        json!({ "dimension": self.dimension, "row": self.row, "count": self.count })
    }
}

fn row_names(max_b: usize) -> Vec<String> {
    let mut names = vec!["smooth Fano polytopes".to_string(), "free sums".into(), "skew bipyramids".into()];
    names.extend((1..=max_b).map(|b| format!("sg simplex-{b} sums")));
    names.push("total sg simplex sums".into());
    names.push("total decomposable".into());
    names
}

fn cells(r: &DecompositionReport, max_b: usize) -> Vec<Option<usize>> {
    let mut out = vec![Some(r.n_polytopes), Some(r.free_sum_ids.len()), Some(r.skew_bipyramid_ids.len())];
    out.extend((1..=max_b).map(|b| r.simplex_sum_ids_by_b.get(&b).map(|s| s.len())));
    out.push(Some(r.union_simplex_ids.len()));
    out.push(Some(r.total_decomposable_ids.len()));
    out
}

fn max_b(reports: &[DecompositionReport]) -> usize {
    reports.iter().map(|r| r.dimension).max().unwrap_or(0)
}

/// Present cells in row-major order.
pub fn table_rows(reports: &[DecompositionReport]) -> Vec<TableRow> {
    let mb = max_b(reports);
    let columns: Vec<Vec<Option<usize>>> = reports.iter().map(|r| cells(r, mb)).collect();
    let mut rows = Vec::new();
    for (i, name) in row_names(mb).into_iter().enumerate() {
        for (r, col) in reports.iter().zip(&columns) {
            if let Some(count) = col[i] {
                rows.push(TableRow { dimension: r.dimension, row: name.clone(), count });
            }
        }
    }
    rows
}

/// Right-aligned columns, one per report; absent cells print as `-`.
pub fn render_table(reports: &[DecompositionReport]) -> String {
    let mb = max_b(reports);
    let names = row_names(mb);
    let columns: Vec<Vec<String>> = reports
        .iter()
        .map(|r| cells(r, mb).into_iter().map(|c| c.map_or("-".to_string(), |n| n.to_string())).collect())
        .collect();
    let headers: Vec<String> = reports.iter().map(|r| r.dimension.to_string()).collect();
    let name_width = names.iter().map(String::len).chain(["dimension".len()]).max().unwrap_or(0);
    let widths: Vec<usize> = headers
        .iter()
        .zip(&columns)
        .map(|(h, col)| col.iter().map(String::len).chain([h.len()]).max().unwrap_or(1))
        .collect();
    let line = |label: &str, values: Vec<&str>| {
        let mut s = format!("{label:<name_width$}");
        for (v, w) in values.into_iter().zip(&widths) {
            s.push_str(&format!("  {v:>w$}"));
        }
        s.push('\n');
        s
    };
    let mut out = line("dimension", headers.iter().map(String::as_str).collect());
    for (i, name) in names.iter().enumerate() {
        out.push_str(&line(name, columns.iter().map(|c| c[i].as_str()).collect()));
    }
    out
}

/// Inverse of [`render_table`] on the present cells. Lines starting with `#` are ignored.
pub fn parse_table(text: &str) -> Result<Vec<TableRow>, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let header: Vec<&str> = lines.next().ok_or("empty table")?.split_whitespace().collect();
    if header.first() != Some(&"dimension") {
        return Err("table must start with a dimension header".into());
    }
    let dims: Vec<usize> =
        header[1..].iter().map(|t| t.parse().map_err(|_| format!("bad dimension {t:?}"))).collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    for l in lines {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        if tokens.len() <= dims.len() {
            return Err(format!("short row {l:?}"));
        }
        let (name, values) = tokens.split_at(tokens.len() - dims.len());
        for (&dimension, v) in dims.iter().zip(values) {
            if *v == "-" {
                continue;
            }
            let count = v.parse().map_err(|_| format!("bad count {v:?} in {l:?}"))?;
            rows.push(TableRow { dimension, row: name.join(" "), count });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeMap, BTreeSet};

    fn ids(n: usize) -> BTreeSet<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    fn report(
        d: usize,
        n: usize,
        fs: usize,
        sb: usize,
        by_b: &[usize],
        union: usize,
        total: usize,
    ) -> DecompositionReport {
        DecompositionReport {
            dimension: d,
            n_polytopes: n,
            free_sum_ids: ids(fs),
            skew_bipyramid_ids: ids(sb),
            simplex_sum_ids_by_b: by_b.iter().enumerate().map(|(i, &k)| (i + 1, ids(k))).collect::<BTreeMap<_, _>>(),
            union_simplex_ids: ids(union),
            total_decomposable_ids: ids(total),
            splits: None,
        }
    }

    #[test]
    fn renders_and_parses_back() {
        let reports = [report(2, 5, 1, 1, &[2, 1], 3, 3), report(3, 18, 5, 9, &[13, 3, 1], 16, 16)];
        let text = render_table(&reports);
        let expected = "\
dimension              2   3
smooth Fano polytopes  5  18
free sums              1   5
skew bipyramids        1   9
sg simplex-1 sums      2  13
sg simplex-2 sums      1   3
sg simplex-3 sums      -   1
total sg simplex sums  3  16
total decomposable     3  16
";
        assert_eq!(text, expected);
        assert_eq!(parse_table(&text).unwrap(), table_rows(&reports));
        assert_eq!(parse_table(&format!("{text}# splits\n# x (a, b)\n")).unwrap(), table_rows(&reports));
        assert_eq!(table_rows(&reports).len(), 15);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_table("").is_err());
        assert!(parse_table("dim 2\nx 1\n").is_err());
        assert!(parse_table("dimension 2\nfree sums x\n").is_err());
    }
}
