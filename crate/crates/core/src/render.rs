//! Deterministic ASCII and SVG board diagrams.
//!
//! SVG panels draw in board units, cell `(i, j)` centred at `(j + 0.5, i + 0.5)`,
//! scaled by [`SVG_SCALE`] pixels per unit.

use crate::certificates::FarkasCertificate;
use crate::digraph::{build_digraph, WhirlDigraph};
use crate::error::{Result, WhirlError};
use crate::geometry::{BoardGeometry, Cell};
use crate::polytope::CycleCover;
use crate::tours::{verify_tour, Tour, TourJson};
use std::fmt::Write as _;
use std::str::FromStr;

pub const SVG_SCALE: i64 = 40;
const PANEL_GAP: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
}

impl FromStr for Format {
    type Err = WhirlError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "svg" => Ok(Format::Svg),
            other => Err(WhirlError::Parse(format!("unknown format '{other}' (expected ascii or svg)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Paint {
    Positive,
    Negative,
    Beta,
    BetaNegative,
    Arc,
    Crossing,
}

impl Paint {
    fn glyph(self) -> char {
        match self {
            Paint::Positive | Paint::Beta => '+',
            Paint::Negative | Paint::BetaNegative => '-',
            Paint::Arc => 'o',
            Paint::Crossing => 'x',
        }
    }

    fn colour(self) -> &'static str {
        match self {
            Paint::Positive => "#1f4e9c",
            Paint::Negative => "#a9c8ee",
            Paint::Beta => "#d9730d",
            Paint::BetaNegative => "#f6c99b",
            Paint::Arc => "#404040",
            Paint::Crossing => "#c62828",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Layer {
    Cells { cells: Vec<Cell>, paint: Paint },
    Arcs { arcs: Vec<(Cell, Cell)>, paint: Paint },
    Labels(Vec<(Cell, String)>),
    PlumbLine,
    Pivot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub n: i64,
    pub title: String,
    pub layers: Vec<Layer>,
}

impl RenderSpec {
    pub fn board(n: i64, title: impl Into<String>) -> Self {
        RenderSpec { n, title: title.into(), layers: vec![Layer::PlumbLine, Layer::Pivot] }
    }

    pub fn validate(&self) -> Result<()> {
        let geom = BoardGeometry::new(self.n)?;
        let check = |c: &Cell| {
            if geom.on_board(*c) {
                Ok(())
            } else {
                Err(WhirlError::OffBoard { cell: *c, n: self.n })
            }
        };
        for layer in &self.layers {
            match layer {
                Layer::Cells { cells, .. } => cells.iter().try_for_each(check)?,
                Layer::Arcs { arcs, .. } => arcs.iter().try_for_each(|(u, v)| check(u).and(check(v)))?,
                Layer::Labels(ls) => ls.iter().try_for_each(|(c, _)| check(c))?,
                Layer::PlumbLine | Layer::Pivot => {}
            }
        }
        Ok(())
    }
}

pub fn board_panels(n: i64) -> Vec<RenderSpec> {
    vec![RenderSpec::board(n, format!("board n={n}"))]
}

pub fn digraph_panels(g: &WhirlDigraph) -> Vec<RenderSpec> {
    let mut spec = RenderSpec::board(g.n(), format!("whirling digraph n={}", g.n()));
    let (cross, plain): (Vec<&crate::digraph::Arc>, Vec<_>) = g.arcs().iter().partition(|a| a.w == 1);
    spec.layers.insert(0, Layer::Arcs { arcs: plain.iter().map(|a| (a.tail, a.head)).collect(), paint: Paint::Arc });
    spec.layers.insert(1, Layer::Arcs { arcs: cross.iter().map(|a| (a.tail, a.head)).collect(), paint: Paint::Crossing });
    let degrees = (0..g.vertex_count()).map(|v| (g.vertices()[v], g.out_ids(v).len().to_string())).collect();
    spec.layers.push(Layer::Labels(degrees));
    vec![spec]
}

/// One panel for the in-row multipliers and one for the out-row multipliers.
pub fn certificate_panels(cert: &FarkasCertificate) -> Vec<RenderSpec> {
    let panel = |name: &str, values: &std::collections::BTreeMap<Cell, i64>, pos: Paint, neg: Paint| {
        let mut spec = RenderSpec::board(cert.n, format!("{name} n={} c={} gamma={}", cert.n, cert.c, cert.gamma));
        let pick = |f: fn(i64) -> bool| values.iter().filter(|(_, &x)| f(x)).map(|(c, _)| *c).collect();
        spec.layers.insert(0, Layer::Cells { cells: pick(|x| x > 0), paint: pos });
        spec.layers.insert(1, Layer::Cells { cells: pick(|x| x < 0), paint: neg });
        spec
    };
    vec![
        panel("alpha", &cert.alpha, Paint::Positive, Paint::Negative),
        panel("beta", &cert.beta, Paint::Beta, Paint::BetaNegative),
    ]
}

pub fn tour_panels(n: i64, g: &WhirlDigraph, tour: &Tour) -> Vec<RenderSpec> {
    let k = tour.cells.len();
    let pairs: Vec<(Cell, Cell)> = (0..k).map(|t| (tour.cells[t], tour.cells[(t + 1) % k])).collect();
    arcs_panel(n, g, format!("tour n={n} coil={}", tour.coil), &pairs, Some(&tour.cells))
}

pub fn cover_panels(g: &WhirlDigraph, cover: &CycleCover) -> Vec<RenderSpec> {
    let vs = g.vertices();
    let pairs: Vec<(Cell, Cell)> = cover.succ.iter().enumerate().map(|(u, &v)| (vs[u], vs[v])).collect();
    arcs_panel(g.n(), g, format!("cycle cover n={}", g.n()), &pairs, None)
}

fn arcs_panel(
    n: i64,
    g: &WhirlDigraph,
    title: String,
    pairs: &[(Cell, Cell)],
    order: Option<&[Cell]>,
) -> Vec<RenderSpec> {
    let mut spec = RenderSpec::board(n, title);
    let crosses = |&(u, v): &(Cell, Cell)| g.find_arc(u, v).is_some_and(|a| a.w == 1);
    let (cross, plain): (Vec<_>, Vec<_>) = pairs.iter().partition(|p| crosses(p));
    spec.layers.insert(0, Layer::Arcs { arcs: plain, paint: Paint::Arc });
    spec.layers.insert(1, Layer::Arcs { arcs: cross, paint: Paint::Crossing });
    if let Some(cells) = order {
        spec.layers.push(Layer::Labels(cells.iter().enumerate().map(|(t, c)| (*c, t.to_string())).collect()));
    }
    vec![spec]
}

/// Panels for any JSON document this crate writes: digraph, certificate,
/// tour or cycle cover, recognised by their distinguishing keys.
pub fn panels_from_json(text: &str) -> Result<Vec<RenderSpec>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| WhirlError::Parse(e.to_string()))?;
    let has = |k: &str| value.get(k).is_some();
    let n = value.get("n").and_then(|v| v.as_i64()).ok_or_else(|| WhirlError::Parse("missing integer field 'n'".into()))?;
    if has("gamma") {
        let cert = FarkasCertificate::from_json(text)?;
        let g = build_digraph(cert.n)?;
        for v in cert.alpha.keys().chain(cert.beta.keys()) {
            g.require_vertex(*v)?;
        }
        Ok(certificate_panels(&cert))
    } else if has("cells") {
        let doc = TourJson::parse(text)?;
        let g = build_digraph(n)?;
        let tour = verify_tour(&g, &doc.cells())?;
        Ok(tour_panels(n, &g, &tour))
    } else if has("succ") {
        let g = build_digraph(n)?;
        let cover = CycleCover::from_json(&g, text)?;
        Ok(cover_panels(&g, &cover))
    } else if has("arcs") {
        Ok(digraph_panels(&WhirlDigraph::from_json(text)?))
    } else {
        Err(WhirlError::Parse("unrecognised document (expected digraph, certificate, tour or cover)".into()))
    }
}

pub fn render(panels: &[RenderSpec], format: Format) -> Result<String> {
    for p in panels {
        p.validate()?;
    }
    Ok(match format {
        Format::Ascii => panels.iter().map(ascii_panel).collect::<Vec<_>>().join("\n"),
        Format::Svg => svg_document(panels),
    })
}

fn ascii_panel(spec: &RenderSpec) -> String {
    let n = spec.n as usize;
    let geom = BoardGeometry::new(spec.n).expect("validated");
    let mut grid = vec![vec![".".to_string(); n]; n];
    let mut plumb = false;
    let mut pivot = false;
    for layer in &spec.layers {
        match layer {
            Layer::Cells { cells, paint } => {
                for c in cells {
                    grid[c.i as usize][c.j as usize] = paint.glyph().to_string();
                }
            }
            Layer::Arcs { .. } => {}
            Layer::Labels(ls) => {
                for (c, s) in ls {
                    grid[c.i as usize][c.j as usize] = s.clone();
                }
            }
            Layer::PlumbLine => plumb = true,
            Layer::Pivot => pivot = true,
        }
    }
    if let Some(c) = geom.centre().filter(|_| pivot) {
        grid[c.i as usize][c.j as usize] = "@".into();
    }
    let width = grid.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    let even = geom.is_even();
    let half = n / 2;

    let mut out = format!("# {}\n", spec.title);
    for (i, row) in grid.iter().enumerate() {
        if even && pivot && i == half {
            let mut sep = String::new();
            for j in 0..n {
                if j == half {
                    sep.push('@');
                } else if j > 0 {
                    sep.push(' ');
                }
                sep.push_str(&" ".repeat(width));
            }
            out.push_str(sep.trim_end());
            out.push('\n');
        }
        let mut line = String::new();
        for (j, s) in row.iter().enumerate() {
            if j > 0 {
                let above = i < half;
                line.push(if even && j == half && plumb && above { '|' } else { ' ' });
            }
            let _ = write!(line, "{s:>width$}");
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn fmt_unit(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn svg_document(panels: &[RenderSpec]) -> String {
    let total_w: f64 = panels.iter().map(|p| p.n as f64).sum::<f64>() + PANEL_GAP * (panels.len().max(1) - 1) as f64;
    let total_h: f64 = panels.iter().map(|p| p.n as f64).fold(0.0, f64::max) + 1.0;
    let s = SVG_SCALE as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt_unit(total_w * s),
        fmt_unit(total_h * s),
        fmt_unit(total_w * s),
        fmt_unit(total_h * s)
    );
    out.push_str(
        "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"5\" markerHeight=\"5\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n",
    );
    let mut x0 = 0.0;
    for spec in panels {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="14">{}</text>"#,
            fmt_unit(x0 * s),
            fmt_unit(0.6 * s),
            spec.title
        );
        let _ = writeln!(out, r#"<g transform="translate({},{}) scale({})">"#, fmt_unit(x0 * s), fmt_unit(s), SVG_SCALE);
        svg_panel(&mut out, spec);
        out.push_str("</g>\n");
        x0 += spec.n as f64 + PANEL_GAP;
    }
    out.push_str("</svg>\n");
    out
}

fn svg_panel(out: &mut String, spec: &RenderSpec) {
    let n = spec.n;
    for i in 0..n {
        for j in 0..n {
            let _ = writeln!(
                out,
                r##"<rect x="{j}" y="{i}" width="1" height="1" fill="#ffffff" stroke="#999999" stroke-width="0.02"/>"##
            );
        }
    }
    let p = (n as f64) / 2.0;
    for layer in &spec.layers {
        match layer {
            Layer::Cells { cells, paint } => {
                for c in cells {
                    let _ = writeln!(
                        out,
                        r##"<rect x="{}" y="{}" width="1" height="1" fill="{}" stroke="#999999" stroke-width="0.02"/>"##,
                        c.j,
                        c.i,
                        paint.colour()
                    );
                }
            }
            Layer::Arcs { arcs, paint } => {
                for (u, v) in arcs {
                    let (x1, y1) = (u.j as f64 + 0.5, u.i as f64 + 0.5);
                    let (x2, y2) = (v.j as f64 + 0.5, v.i as f64 + 0.5);
                    let lerp = |a: f64, b: f64, t: f64| a + (b - a) * t;
                    let _ = writeln!(
                        out,
                        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="0.04" marker-end="url(#head)"/>"#,
                        fmt_unit(lerp(x1, x2, 0.15)),
                        fmt_unit(lerp(y1, y2, 0.15)),
                        fmt_unit(lerp(x1, x2, 0.85)),
                        fmt_unit(lerp(y1, y2, 0.85)),
                        paint.colour()
                    );
                }
            }
            Layer::Labels(ls) => {
                for (c, s) in ls {
                    let _ = writeln!(
                        out,
                        r#"<text x="{}" y="{}" font-family="monospace" font-size="0.3" text-anchor="middle">{s}</text>"#,
                        fmt_unit(c.j as f64 + 0.5),
                        fmt_unit(c.i as f64 + 0.6)
                    );
                }
            }
            Layer::PlumbLine => {
                let _ = writeln!(
                    out,
                    r##"<line x1="{0}" y1="0" x2="{0}" y2="{0}" stroke="#000000" stroke-width="0.04" stroke-dasharray="0.15,0.1"/>"##,
                    fmt_unit(p)
                );
            }
            Layer::Pivot => {
                let _ = writeln!(out, r##"<circle cx="{0}" cy="{0}" r="0.1" fill="#000000"/>"##, fmt_unit(p));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::{build_t1, build_t2};
    use crate::digraph::build_digraph;

    #[test]
    fn empty_board_ascii() {
        let text = render(&board_panels(4), Format::Ascii).unwrap();
        assert_eq!(text, "# board n=4\n. .|. .\n. .|. .\n   @\n. . . .\n. . . .\n");
    }

    #[test]
    fn empty_board_svg_pivot() {
        let text = render(&board_panels(4), Format::Svg).unwrap();
        assert!(text.contains(r#"<circle cx="2" cy="2" r="0.1""#));
        assert!(text.contains(r#"<line x1="2" y1="0" x2="2" y2="2""#));
        assert_eq!(text.matches("<rect").count(), 16);
    }

    #[test]
    fn t1_blocks_ascii() {
        let text = render(&certificate_panels(&build_t1(14).unwrap()), Format::Ascii).unwrap();
        let alpha: Vec<&str> = text.lines().skip(1).take(7).collect();
        for (i, line) in alpha.iter().enumerate() {
            let cells: Vec<char> = line.chars().step_by(2).collect();
            let expect_plus = [0, 1, 4, 5].contains(&i);
            assert_eq!(cells[6] == '+', expect_plus, "row {i}: {line}");
            assert_eq!(cells.iter().filter(|&&c| c == '+').count(), expect_plus as usize);
        }
    }

    #[test]
    fn t2_alpha_panel_cells() {
        let cert = build_t2(12).unwrap();
        let panels = certificate_panels(&cert);
        let Layer::Cells { cells: pos, .. } = &panels[0].layers[0] else { panic!() };
        assert_eq!(pos, &vec![Cell::new(0, 5), Cell::new(4, 5)]);
        let Layer::Cells { cells: neg, .. } = &panels[0].layers[1] else { panic!() };
        assert!(neg.iter().all(|c| c.j >= 6 && c.i + c.j <= 11 && (c.i + c.j) % 2 == 0));
        assert!(!neg.contains(&Cell::new(0, 6)) || cert.alpha_at(Cell::new(0, 6)) == -1);
    }

    #[test]
    fn documents_are_recognised() {
        let cert = build_t2(4).unwrap().to_json();
        assert_eq!(panels_from_json(&cert).unwrap().len(), 2);
        let g = build_digraph(4).unwrap().to_json();
        assert_eq!(panels_from_json(&g).unwrap()[0].title, "whirling digraph n=4");
        assert!(panels_from_json(r#"{"n":4}"#).is_err());
        assert!(panels_from_json("not json").is_err());
    }

    #[test]
    fn render_is_deterministic_and_validated() {
        let g = build_digraph(6).unwrap();
        let a = render(&digraph_panels(&g), Format::Svg).unwrap();
        let b = render(&digraph_panels(&g), Format::Svg).unwrap();
        assert_eq!(a, b);
        let mut bad = RenderSpec::board(4, "bad");
        bad.layers.push(Layer::Cells { cells: vec![Cell::new(4, 0)], paint: Paint::Positive });
        assert!(render(&[bad], Format::Ascii).is_err());
        assert!("png".parse::<Format>().is_err());
    }
}
