//! Plain-text renderings of the sign tables.

use std::fmt::Write as _;

use kotriple_core::kosigns::{
    classic_table, complete_table, extended_table, product_table, KOClass, KOSigns,
    MnemonicDerivation, Sign,
};
use serde::Serialize;

fn cell(s: Option<Sign>) -> String {
    s.map(|s| s.to_string()).unwrap_or_default()
}

fn row(out: &mut String, head: &str, cells: &[String], width: usize) {
    write!(out, "{head:<6}").unwrap();
    for c in cells {
        write!(out, "{c:>width$}").unwrap();
    }
    out.push('\n');
}

pub fn classic_text() -> String {
    let cols = classic_table();
    let mut out = String::from("Mod 8 KO-dimension signs, traditional presentation\n");
    let w = 6;
    row(
        &mut out,
        "",
        &cols.iter().map(|c| c.dim.to_string()).collect::<Vec<_>>(),
        w,
    );
    row(
        &mut out,
        "ε",
        &cols.iter().map(|c| c.eps.to_string()).collect::<Vec<_>>(),
        w,
    );
    row(
        &mut out,
        "ε′",
        &cols
            .iter()
            .map(|c| c.eps_prime.to_string())
            .collect::<Vec<_>>(),
        w,
    );
    row(
        &mut out,
        "ε″",
        &cols.iter().map(|c| cell(c.eps_dprime)).collect::<Vec<_>>(),
        w,
    );
    row(
        &mut out,
        "class",
        &cols
            .iter()
            .map(|c| c.class.map(|k| k.to_string()).unwrap_or_default())
            .collect::<Vec<_>>(),
        w,
    );
    out
}

pub fn extended_text() -> String {
    let cols = extended_table();
    let mut out = String::from("Extended mod 8 KO-dimension signs (even columns grouped by ε′)\n");
    let w = 5;
    row(
        &mut out,
        "",
        &cols.iter().map(|c| c.dim.to_string()).collect::<Vec<_>>(),
        w,
    );
    row(
        &mut out,
        "ε",
        &cols.iter().map(|c| c.eps.to_string()).collect::<Vec<_>>(),
        w,
    );
    row(
        &mut out,
        "ε′",
        &cols
            .iter()
            .map(|c| c.eps_prime.to_string())
            .collect::<Vec<_>>(),
        w,
    );
    row(
        &mut out,
        "ε″",
        &cols.iter().map(|c| cell(c.eps_dprime)).collect::<Vec<_>>(),
        w,
    );
    row(
        &mut out,
        "",
        &cols
            .iter()
            .map(|c| {
                c.variant
                    .map(|v| v.letter().to_string())
                    .unwrap_or_default()
            })
            .collect::<Vec<_>>(),
        w,
    );
    out
}

fn stacked(u: Sign, l: Sign, shared: bool, mark: &str) -> String {
    if shared {
        u.to_string()
    } else {
        format!("{u}/{l}{mark}")
    }
}

fn complete_rows(cols: &[kotriple_core::kosigns::CompleteColumn]) -> [Vec<String>; 3] {
    let pick = |f: fn(&KOSigns) -> Sign, odd_mark: &str| -> Vec<String> {
        cols.iter()
            .map(|c| {
                let (u, l) = (f(&c.upper), f(&c.lower));
                stacked(u, l, u == l, if c.dim % 2 == 1 { odd_mark } else { "" })
            })
            .collect()
    };
    [
        pick(|s| s.eps, ""),
        pick(|s| s.eps_prime, ""),
        pick(|s| s.eps_dprime, "*"),
    ]
}

pub fn complete_text() -> String {
    let cols = complete_table();
    let mut out =
        String::from("Complete mod 8 KO-dimension table (stacked entries are upper/lower)\n");
    let w = 9;
    row(
        &mut out,
        "",
        &cols.iter().map(|c| c.dim.to_string()).collect::<Vec<_>>(),
        w,
    );
    let [eps, eps_prime, eps_dprime] = complete_rows(&cols);
    row(&mut out, "ε", &eps, w);
    row(&mut out, "ε′", &eps_prime, w);
    row(&mut out, "ε″", &eps_dprime, w);
    out.push_str("* assigned ε″ labels of odd dimensions\n");
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductRow {
    pub row: KOClass,
    /// `None` where the factors mix upper and lower variants.
    pub cells: Vec<Option<KOClass>>,
}

pub fn product_rows() -> Vec<ProductRow> {
    product_table()
        .rows()
        .map(|(row, cells)| ProductRow {
            row,
            cells: cells.iter().map(|c| c.as_ref().ok().copied()).collect(),
        })
        .collect()
}

pub fn product_text() -> String {
    let mut out = String::from("Graded product table (blank: no well-defined KO-dimension)\n");
    let w = 5;
    let header: Vec<String> = KOClass::all().map(|c| c.to_string()).collect();
    row(&mut out, "", &header, w);
    for r in product_rows() {
        let cells: Vec<String> = r
            .cells
            .iter()
            .map(|c| c.map(|k| k.to_string()).unwrap_or_default())
            .collect();
        row(&mut out, &r.row.to_string(), &cells, w);
    }
    out
}

pub fn mnemonic_text(m: &MnemonicDerivation) -> String {
    let mut out = String::new();
    writeln!(out, "Step 1: pair the 8 even sign triples under J ↦ γJ").unwrap();
    for (k, [a, b]) in m.flip_pairs.iter().enumerate() {
        writeln!(out, "  pair {k}: {a} ↔ {b}").unwrap();
    }
    writeln!(
        out,
        "Step 2: pairs closed under the even product: {:?}",
        m.self_closed
    )
    .unwrap();
    writeln!(
        out,
        "  dim 0 = pair {}; dim 4 = pair {} (squares into dim 0)",
        m.dim0_pair, m.dim4_pair
    )
    .unwrap();
    writeln!(
        out,
        "Step 3: {{ε, ε′}} chain 0_L → 1 → 2_U, … ; {} upper/lower choices for dim 0 close the chain, ε′_U = ε″_U selects one",
        m.chain_consistent_assignments
    )
    .unwrap();
    writeln!(out, "Derived table:").unwrap();
    for (c, s) in &m.table {
        writeln!(out, "  {c}: {s}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_eps_dprime_even_cells() {
        let [_, _, dprime] = complete_rows(&complete_table());
        let even: Vec<&str> = dprime.iter().step_by(2).map(String::as_str).collect();
        assert_eq!(even, ["+1", "-1", "+1", "-1"]);
        assert_eq!(dprime[1], "-1/+1*");
    }

    #[test]
    fn product_text_shape() {
        let text = product_text();
        assert_eq!(text.lines().count(), 18);
        let one_u = text.lines().find(|l| l.starts_with("1_U")).unwrap();
        assert_eq!(one_u.split_whitespace().nth(2), Some("2_U"));
    }

    #[test]
    fn classic_four_column() {
        let text = classic_text();
        let token = |name: &str, k: usize| -> String {
            text.lines()
                .find(|l| l.starts_with(name))
                .unwrap()
                .split_whitespace()
                .nth(k)
                .unwrap()
                .to_string()
        };
        assert_eq!(token("ε ", 5), "-1");
        assert_eq!(token("ε′", 5), "+1");
        // odd columns of the ε″ row are blank
        assert_eq!(token("ε″", 3), "+1");
    }
}
