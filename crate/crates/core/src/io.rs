//! Version-tagged text file formats for every object kind.
//!
//! Every file starts with a magic line, then the field header, then a
//! kind-specific claim line, then matrix blocks (each a complete matrix
//! file). Elements are comma-joined base-p coefficients low-to-high; fields
//! carry their modulus so presentations are pinned. Rationals are always
//! written `a/b` and never parsed from decimal notation.

use std::path::Path;

use crate::error::{Error, Result};
use crate::expander::DimExpander;
use crate::gf::Field;
use crate::linalg::FMatrix;
use crate::seeded::{CondenserClaim, RankMode, Rat, SeededCondenser, SubspaceDesign};
use crate::twosource::{BilinearCondenser, RankMetricCode, TwoSourceClaim};

pub const MATRIX_MAGIC: &str = "rankforge-matrix v1";
pub const COLLECTION_MAGIC: &str = "rankforge-collection v1";
pub const DESIGN_MAGIC: &str = "rankforge-design v1";
pub const EXPANDER_MAGIC: &str = "rankforge-expander v1";
pub const CODE_MAGIC: &str = "rankforge-code v1";
pub const BILINEAR_MAGIC: &str = "rankforge-bilinear v1";

/// Renders a rational as `numer/denom`, the only accepted wire form.
pub fn rat_to_string(r: Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `a/b` or a bare integer `a`. Decimal notation is rejected.
pub fn parse_rat(s: &str) -> Result<Rat> {
    if s.contains('.') {
        return Err(Error::Parse(format!(
            "rational '{s}': decimal notation is not accepted, write a/b"
        )));
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let n: i64 = num.trim().parse().map_err(|_| Error::Parse(format!("rational numerator '{num}'")))?;
    let d: i64 = den.trim().parse().map_err(|_| Error::Parse(format!("rational denominator '{den}'")))?;
    if d == 0 {
        return Err(Error::Parse(format!("rational '{s}': zero denominator")));
    }
    Ok(Rat::new(n, d))
}

struct LineReader<'a> {
    lines: std::iter::Peekable<std::str::Lines<'a>>,
    lineno: usize,
}

impl<'a> LineReader<'a> {
    fn new(text: &'a str) -> LineReader<'a> {
        LineReader { lines: text.lines().peekable(), lineno: 0 }
    }

    fn next_line(&mut self) -> Result<&'a str> {
        self.lineno += 1;
        self.lines
            .next()
            .ok_or_else(|| Error::Parse(format!("unexpected end of file at line {}", self.lineno)))
    }

    fn peek(&mut self) -> Option<&&'a str> {
        self.lines.peek()
    }

    fn expect(&mut self, expected: &str) -> Result<()> {
        let line = self.next_line()?;
        if line != expected {
            return Err(Error::Parse(format!("expected '{expected}', got '{line}'")));
        }
        Ok(())
    }
}

/// Splits `key=value` tokens of a header line into lookups.
fn kv_fields(line: &str) -> Vec<(&str, &str)> {
    line.split_whitespace()
        .filter_map(|tok| tok.split_once('='))
        .collect()
}

fn lookup<'a>(fields: &[(&'a str, &'a str)], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parse(format!("missing field '{key}'")))
}

fn parse_usize(fields: &[(&str, &str)], key: &str) -> Result<usize> {
    lookup(fields, key)?
        .parse()
        .map_err(|_| Error::Parse(format!("field '{key}' is not an integer")))
}

fn write_field_header(out: &mut String, field: &Field) {
    out.push_str(&field.header());
    out.push('\n');
}

fn read_field_header(reader: &mut LineReader) -> Result<Field> {
    let line = reader.next_line()?;
    if !line.starts_with("field ") {
        return Err(Error::Parse(format!("expected field header, got '{line}'")));
    }
    let fields = kv_fields(line);
    let p: u64 = lookup(&fields, "p")?
        .parse()
        .map_err(|_| Error::Parse("field 'p' is not an integer".into()))?;
    let k: u32 = lookup(&fields, "k")?
        .parse()
        .map_err(|_| Error::Parse("field 'k' is not an integer".into()))?;
    let field = Field::new(p, k)?;
    if k > 1 {
        let stated = lookup(&fields, "modulus")?;
        let canonical = field
            .modulus()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        if stated != canonical {
            return Err(Error::Parse(format!(
                "modulus '{stated}' differs from the canonical presentation '{canonical}'"
            )));
        }
    }
    Ok(field)
}

// ---- matrix ----

pub fn matrix_to_string(m: &FMatrix) -> String {
    let mut out = String::new();
    out.push_str(MATRIX_MAGIC);
    out.push('\n');
    write_field_header(&mut out, m.field());
    out.push_str(&format!("rows={} cols={}\n", m.rows(), m.cols()));
    for row in m.row_strings() {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn read_matrix_block(reader: &mut LineReader) -> Result<FMatrix> {
    reader.expect(MATRIX_MAGIC)?;
    let field = read_field_header(reader)?;
    let dims = kv_fields(reader.next_line()?);
    let rows = parse_usize(&dims, "rows")?;
    let cols = parse_usize(&dims, "cols")?;
    let mut m = FMatrix::zeros(&field, rows, cols);
    for i in 0..rows {
        let line = reader.next_line()?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != cols {
            return Err(Error::Parse(format!(
                "row {i}: expected {cols} entries, got {}",
                toks.len()
            )));
        }
        for (j, tok) in toks.iter().enumerate() {
            m.set(i, j, field.elem_from_str(tok)?);
        }
    }
    Ok(m)
}

pub fn matrix_from_string(text: &str) -> Result<FMatrix> {
    read_matrix_block(&mut LineReader::new(text))
}

// ---- seeded collection ----

pub fn collection_to_string(c: &SeededCondenser) -> String {
    collection_to_string_with_provenance(c, None)
}

/// Lifted collections record their source extension as a provenance comment
/// right after the claim line.
pub fn collection_to_string_with_provenance(c: &SeededCondenser, provenance: Option<&str>) -> String {
    let mut out = String::new();
    out.push_str(COLLECTION_MAGIC);
    out.push('\n');
    write_field_header(&mut out, &c.field);
    let claim_line = match &c.claim {
        CondenserClaim::WeakLossless { r, l } => {
            format!("kind=weak n={} t={} r={r} L={} count={}", c.n, c.t, rat_to_string(*l), c.matrices.len())
        }
        CondenserClaim::StrongLossless { r, l } => {
            format!("kind=strong n={} t={} r={r} L={} count={}", c.n, c.t, rat_to_string(*l), c.matrices.len())
        }
        CondenserClaim::Lossy { r, eps, mode } => format!(
            "kind=lossy n={} t={} r={r} eps={} mode={} count={}",
            c.n,
            c.t,
            rat_to_string(*eps),
            mode.as_str(),
            c.matrices.len()
        ),
    };
    out.push_str(&claim_line);
    out.push('\n');
    if let Some(p) = provenance {
        out.push_str(&format!("# lifted-from {p}\n"));
    }
    for m in &c.matrices {
        out.push_str(&matrix_to_string(m));
    }
    out
}

fn parse_mode(s: &str) -> Result<RankMode> {
    match s {
        "eq" => Ok(RankMode::Eq),
        "le" => Ok(RankMode::Le),
        other => Err(Error::Parse(format!("mode '{other}' is not eq|le"))),
    }
}

pub fn collection_from_string(text: &str) -> Result<SeededCondenser> {
    let mut reader = LineReader::new(text);
    reader.expect(COLLECTION_MAGIC)?;
    let field = read_field_header(&mut reader)?;
    let header = kv_fields(reader.next_line()?);
    let kind = lookup(&header, "kind")?;
    let n = parse_usize(&header, "n")?;
    let t = parse_usize(&header, "t")?;
    let r = parse_usize(&header, "r")?;
    let count = parse_usize(&header, "count")?;
    let claim = match kind {
        "weak" => CondenserClaim::WeakLossless { r, l: parse_rat(lookup(&header, "L")?)? },
        "strong" => CondenserClaim::StrongLossless { r, l: parse_rat(lookup(&header, "L")?)? },
        "lossy" => CondenserClaim::Lossy {
            r,
            eps: parse_rat(lookup(&header, "eps")?)?,
            mode: parse_mode(lookup(&header, "mode")?)?,
        },
        other => return Err(Error::Parse(format!("kind '{other}' is not weak|strong|lossy"))),
    };
    skip_comments(&mut reader);
    let mut matrices = Vec::with_capacity(count);
    for _ in 0..count {
        let m = read_matrix_block(&mut reader)?;
        if m.rows() != t || m.cols() != n || *m.field() != field {
            return Err(Error::Parse("collection matrix has mismatched shape or field".into()));
        }
        matrices.push(m);
    }
    Ok(SeededCondenser { field, n, t, matrices, claim })
}

fn skip_comments(reader: &mut LineReader) {
    while reader.peek().is_some_and(|l| l.starts_with('#')) {
        let _ = reader.next_line();
    }
}

// ---- design ----

pub fn design_to_string(d: &SubspaceDesign) -> String {
    let mut out = String::new();
    out.push_str(DESIGN_MAGIC);
    out.push('\n');
    write_field_header(&mut out, &d.field);
    out.push_str(&format!(
        "kind={} n={} r={} L={} count={}\n",
        if d.strong { "strong" } else { "weak" },
        d.n,
        d.r,
        rat_to_string(d.l),
        d.subspaces.len()
    ));
    for m in &d.subspaces {
        out.push_str(&matrix_to_string(m));
    }
    out
}

pub fn design_from_string(text: &str) -> Result<SubspaceDesign> {
    let mut reader = LineReader::new(text);
    reader.expect(DESIGN_MAGIC)?;
    let field = read_field_header(&mut reader)?;
    let header = kv_fields(reader.next_line()?);
    let strong = match lookup(&header, "kind")? {
        "strong" => true,
        "weak" => false,
        other => return Err(Error::Parse(format!("kind '{other}' is not weak|strong"))),
    };
    let n = parse_usize(&header, "n")?;
    let r = parse_usize(&header, "r")?;
    let l = parse_rat(lookup(&header, "L")?)?;
    let count = parse_usize(&header, "count")?;
    skip_comments(&mut reader);
    let mut subspaces = Vec::with_capacity(count);
    for _ in 0..count {
        let m = read_matrix_block(&mut reader)?;
        if m.cols() != n || *m.field() != field {
            return Err(Error::Parse("design subspace has mismatched shape or field".into()));
        }
        subspaces.push(m);
    }
    Ok(SubspaceDesign { field, n, subspaces, strong, r, l })
}

// ---- expander ----

pub fn expander_to_string(x: &DimExpander) -> String {
    let mut out = String::new();
    out.push_str(EXPANDER_MAGIC);
    out.push('\n');
    write_field_header(&mut out, &x.field);
    out.push_str(&format!(
        "n={} degree={} eps={} alpha={}\n",
        x.n,
        x.degree(),
        rat_to_string(x.eps),
        rat_to_string(x.alpha)
    ));
    for m in &x.maps {
        out.push_str(&matrix_to_string(m));
    }
    out
}

pub fn expander_from_string(text: &str) -> Result<DimExpander> {
    let mut reader = LineReader::new(text);
    reader.expect(EXPANDER_MAGIC)?;
    let field = read_field_header(&mut reader)?;
    let header = kv_fields(reader.next_line()?);
    let n = parse_usize(&header, "n")?;
    let degree = parse_usize(&header, "degree")?;
    let eps = parse_rat(lookup(&header, "eps")?)?;
    let alpha = parse_rat(lookup(&header, "alpha")?)?;
    skip_comments(&mut reader);
    let mut maps = Vec::with_capacity(degree);
    for _ in 0..degree {
        let m = read_matrix_block(&mut reader)?;
        if m.rows() != n || m.cols() != n || *m.field() != field {
            return Err(Error::Parse("expander map has mismatched shape or field".into()));
        }
        maps.push(m);
    }
    Ok(DimExpander { field, n, maps, eps, alpha })
}

// ---- rank-metric code ----

pub fn code_to_string(c: &RankMetricCode) -> String {
    let mut out = String::new();
    out.push_str(CODE_MAGIC);
    out.push('\n');
    write_field_header(&mut out, &c.field);
    out.push_str(&format!("n={} m={} dim={} dist={}\n", c.n, c.m, c.dim(), c.dist));
    for m in &c.basis {
        out.push_str(&matrix_to_string(m));
    }
    out
}

pub fn code_from_string(text: &str) -> Result<RankMetricCode> {
    let mut reader = LineReader::new(text);
    reader.expect(CODE_MAGIC)?;
    let field = read_field_header(&mut reader)?;
    let header = kv_fields(reader.next_line()?);
    let n = parse_usize(&header, "n")?;
    let m = parse_usize(&header, "m")?;
    let dim = parse_usize(&header, "dim")?;
    let dist = parse_usize(&header, "dist")?;
    skip_comments(&mut reader);
    let mut basis = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mat = read_matrix_block(&mut reader)?;
        if mat.rows() != n || mat.cols() != m || *mat.field() != field {
            return Err(Error::Parse("code basis matrix has mismatched shape or field".into()));
        }
        basis.push(mat);
    }
    Ok(RankMetricCode { field, n, m, basis, dist })
}

// ---- bilinear condenser ----

pub fn bilinear_to_string(b: &BilinearCondenser) -> String {
    let mut out = String::new();
    out.push_str(BILINEAR_MAGIC);
    out.push('\n');
    write_field_header(&mut out, &b.field);
    let first = b.claims.first();
    let (r, s, eps) = first
        .map(|c| (c.r, c.s, c.eps))
        .unwrap_or((0, 0, Rat::new(0, 1)));
    out.push_str(&format!(
        "n={} m={} t={} r={r} s={s} eps={}\n",
        b.n,
        b.m,
        b.t,
        rat_to_string(eps)
    ));
    if let Some(c) = first {
        if c.rmode != RankMode::Eq || c.smode != RankMode::Eq {
            out.push_str(&format!("# mode r={} s={}\n", c.rmode.as_str(), c.smode.as_str()));
        }
    }
    for extra in b.claims.iter().skip(1) {
        out.push_str(&format!(
            "# claim r={} s={} eps={} rmode={} smode={}\n",
            extra.r,
            extra.s,
            rat_to_string(extra.eps),
            extra.rmode.as_str(),
            extra.smode.as_str()
        ));
    }
    out.push_str(&matrix_to_string(&b.e));
    out
}

pub fn bilinear_from_string(text: &str) -> Result<BilinearCondenser> {
    let mut reader = LineReader::new(text);
    reader.expect(BILINEAR_MAGIC)?;
    let field = read_field_header(&mut reader)?;
    let header = kv_fields(reader.next_line()?);
    let n = parse_usize(&header, "n")?;
    let m = parse_usize(&header, "m")?;
    let t = parse_usize(&header, "t")?;
    let r = parse_usize(&header, "r")?;
    let s = parse_usize(&header, "s")?;
    let eps = parse_rat(lookup(&header, "eps")?)?;
    let mut claims = vec![TwoSourceClaim { r, s, eps, rmode: RankMode::Eq, smode: RankMode::Eq }];
    while let Some(line) = reader.peek().filter(|l| l.starts_with('#')) {
        let line = *line;
        let _ = reader.next_line();
        if let Some(rest) = line.strip_prefix("# mode ") {
            let fields = kv_fields(rest);
            claims[0].rmode = parse_mode(lookup(&fields, "r")?)?;
            claims[0].smode = parse_mode(lookup(&fields, "s")?)?;
        } else if let Some(rest) = line.strip_prefix("# claim ") {
            let fields = kv_fields(rest);
            claims.push(TwoSourceClaim {
                r: parse_usize(&fields, "r")?,
                s: parse_usize(&fields, "s")?,
                eps: parse_rat(lookup(&fields, "eps")?)?,
                rmode: parse_mode(lookup(&fields, "rmode")?)?,
                smode: parse_mode(lookup(&fields, "smode")?)?,
            });
        }
    }
    let e = read_matrix_block(&mut reader)?;
    if e.rows() != t || e.cols() != n * m || *e.field() != field {
        return Err(Error::Parse("bilinear matrix has mismatched shape or field".into()));
    }
    Ok(BilinearCondenser { field, n, m, t, e, claims })
}

// ---- file dispatch ----

/// Any object the file formats can carry.
pub enum RankforgeFile {
    Matrix(FMatrix),
    Collection(SeededCondenser),
    Design(SubspaceDesign),
    Expander(DimExpander),
    Code(RankMetricCode),
    Bilinear(BilinearCondenser),
}

pub fn read_file(path: &Path) -> Result<RankforgeFile> {
    let text = std::fs::read_to_string(path)?;
    let magic = text.lines().next().unwrap_or("");
    match magic {
        MATRIX_MAGIC => Ok(RankforgeFile::Matrix(matrix_from_string(&text)?)),
        COLLECTION_MAGIC => Ok(RankforgeFile::Collection(collection_from_string(&text)?)),
        DESIGN_MAGIC => Ok(RankforgeFile::Design(design_from_string(&text)?)),
        EXPANDER_MAGIC => Ok(RankforgeFile::Expander(expander_from_string(&text)?)),
        CODE_MAGIC => Ok(RankforgeFile::Code(code_from_string(&text)?)),
        BILINEAR_MAGIC => Ok(RankforgeFile::Bilinear(bilinear_from_string(&text)?)),
        other => Err(Error::Parse(format!("unknown file magic '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded::lossless_collection;

    #[test]
    fn rational_wire_format() {
        assert_eq!(parse_rat("1/2").unwrap(), Rat::new(1, 2));
        assert_eq!(parse_rat("3").unwrap(), Rat::new(3, 1));
        assert!(parse_rat("0.5").is_err());
        assert!(parse_rat("1/0").is_err());
        assert_eq!(rat_to_string(Rat::new(4, 8)), "1/2");
    }

    #[test]
    fn matrix_round_trip_bit_exact() {
        let f4 = Field::new(2, 2).unwrap();
        let m = FMatrix::from_fn(&f4, 2, 3, |i, j| f4.elem(((i * 3 + j) % 4) as u64));
        let text = matrix_to_string(&m);
        let back = matrix_from_string(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(matrix_to_string(&back), text);
    }

    #[test]
    fn collection_round_trip() {
        let f13 = Field::new(13, 1).unwrap();
        let c = lossless_collection(&f13, 5, 3, 2).unwrap();
        let text = collection_to_string(&c);
        let back = collection_from_string(&text).unwrap();
        assert_eq!(back.matrices, c.matrices);
        assert_eq!(back.claim, c.claim);
        assert_eq!(collection_to_string(&back), text);
    }

    #[test]
    fn provenance_comment_is_tolerated() {
        let f8 = Field::new(2, 3).unwrap();
        let c = lossless_collection(&f8, 5, 3, 2).unwrap();
        let lifted = crate::smallfield::lift_condenser(&c).unwrap();
        let text = collection_to_string_with_provenance(&lifted, Some("p=2 k=3"));
        assert!(text.contains("# lifted-from p=2 k=3"));
        let back = collection_from_string(&text).unwrap();
        assert_eq!(back.matrices, lifted.matrices);
    }

    #[test]
    fn bilinear_round_trip_with_claims() {
        let g = crate::twosource::gabidulin_code(2, 4, 4, 2).unwrap();
        let b = crate::twosource::code_to_condenser(&g).unwrap();
        let text = bilinear_to_string(&b);
        let back = bilinear_from_string(&text).unwrap();
        assert_eq!(back.e, b.e);
        assert_eq!(back.claims, b.claims);
        assert_eq!(bilinear_to_string(&back), text);
    }

    #[test]
    fn code_round_trip() {
        let f5 = Field::new(5, 1).unwrap();
        let c = crate::twosource::roth_code(&f5, 4, 4, 2).unwrap();
        let text = code_to_string(&c);
        let back = code_from_string(&text).unwrap();
        assert_eq!(back.basis, c.basis);
        assert_eq!(back.dist, c.dist);
    }

    #[test]
    fn malformed_inputs_name_the_offender() {
        let err = parse_rat("0.25").unwrap_err();
        assert!(err.to_string().contains("0.25"));
        let err = matrix_from_string("rankforge-matrix v1\nfield p=7 k=1\nrows=1 cols=2\n9 1\n")
            .unwrap_err();
        assert!(err.to_string().contains('9') || err.to_string().contains("element"));
    }
}
