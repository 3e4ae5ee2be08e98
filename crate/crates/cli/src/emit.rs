//! DOT and TikZ emitters.

use gentle_core::quiver::LocallyGentlePair;
use gentle_core::surface::LabeledTiling;

/// DOT digraph with one edge per arrow; each relation appears as a dashed
/// unconstrained edge from the start of its inner arrow to the end of its
/// outer arrow.
pub fn dot(pair: &LocallyGentlePair) -> String {
    let q = pair.quiver();
    let mut out = String::from("digraph quiver {\n");
    for v in q.vertex_ids() {
        out.push_str(&format!("  \"{}\";\n", q.vertex_name(v)));
    }
    for a in q.arrows() {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            q.vertex_name(a.tail),
            q.vertex_name(a.head),
            a.name
        ));
    }
    for r in pair.relations() {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [style=dashed, constraint=false, label=\"{}*{}\"];\n",
            q.vertex_name(q.tail(r.inner)),
            q.vertex_name(q.head(r.outer)),
            q.arrow(r.outer).name,
            q.arrow(r.inner).name
        ));
    }
    out.push_str("}\n");
    out
}

const GREEK: &[(&str, &str)] = &[
    ("alpha", "\\alpha"),
    ("beta", "\\beta"),
    ("gamma", "\\gamma"),
    ("delta", "\\delta"),
    ("epsilon", "\\epsilon"),
    ("zeta", "\\zeta"),
    ("eta", "\\eta"),
    ("theta", "\\theta"),
    ("iota", "\\iota"),
    ("kappa", "\\kappa"),
    ("lambda", "\\lambda"),
    ("mu", "\\mu"),
    ("nu", "\\nu"),
    ("xi", "\\xi"),
    ("pi", "\\pi"),
    ("rho", "\\rho"),
    ("sigma", "\\sigma"),
    ("tau", "\\tau"),
    ("phi", "\\phi"),
    ("chi", "\\chi"),
    ("psi", "\\psi"),
    ("omega", "\\omega"),
];

fn tex_name(name: &str) -> String {
    for (plain, tex) in GREEK {
        if name == *plain {
            return format!("${tex}$");
        }
    }
    name.to_string()
}

/// Schematic TikZ skeleton: fans on a circle, arcs as chords, face labels
/// at chord midpoints. A sketch of the combinatorics, not a faithful
/// redrawing.
pub fn tikz(tiling: &LabeledTiling) -> String {
    let surface = &tiling.surface;
    let pair = surface.pair();
    let q = pair.quiver();
    let fans = surface.v_fans();
    let n = fans.len().max(1);
    let mut out = String::from("\\begin{tikzpicture}\n");
    // One node per fan, evenly spaced.
    for (i, fan) in fans.iter().enumerate() {
        let angle = 360.0 * i as f64 / n as f64;
        let label = if fan.cyclic { "puncture" } else { "point" };
        out.push_str(&format!(
            "  \\node[circle, fill, inner sep=1pt, label={{{label} {i}}}] (p{i}) at ({angle:.1}:3) {{}};\n"
        ));
    }
    // Each arc joins the fans holding its two ends.
    let fan_of_arc_end = |arc: usize, end: u8| -> usize {
        for (i, fan) in fans.iter().enumerate() {
            if let Some((v, slot)) = fan.anchor {
                if v.0 == arc && slot == end {
                    return i;
                }
            }
        }
        // Nonempty fans: search the end assignment.
        for (i, _fan) in fans.iter().enumerate() {
            for a in q.arrow_ids() {
                let ends = surface.end_assignment()[a.0];
                let fan_holds = |x: gentle_core::quiver::ArrowId| {
                    fans[i].arrows.contains(&x)
                };
                if q.tail(a).0 == arc && ends.tail_end == end && fan_holds(a) {
                    return i;
                }
                if q.head(a).0 == arc && ends.head_end == end && fan_holds(a) {
                    return i;
                }
            }
        }
        0
    };
    for v in q.vertex_ids() {
        let f0 = fan_of_arc_end(v.0, 0);
        let f1 = fan_of_arc_end(v.0, 1);
        out.push_str(&format!(
            "  \\draw[blue] (p{f0}) to[bend left=15] node[pos=0.5, above] {{{}}} (p{f1});\n",
            tex_name(q.vertex_name(v))
        ));
    }
    // Face labels sit next to the marked point carrying the arrow's
    // sector.
    for face in tiling.type2_faces() {
        let a = q.arrow(face.arrow);
        let (fan_idx, pos) = fans
            .iter()
            .enumerate()
            .find_map(|(i, f)| {
                f.arrows
                    .iter()
                    .position(|&x| x == face.arrow)
                    .map(|k| (i, k))
            })
            .unwrap_or((0, 0));
        // Spread the sector labels of one fan around its point.
        let spread = fans[fan_idx].arrows.len().max(1) as f64;
        let angle = 360.0 * fan_idx as f64 / n as f64
            + (pos as f64 + 0.5 - spread / 2.0) * (40.0 / spread);
        let greek = tex_name(&a.name).trim_matches('$').to_string();
        out.push_str(&format!(
            "  \\node[red] at ({angle:.1}:2.2) {{$\\sigma_{{{greek}}}$}}; % arcs {} and {}\n",
            q.vertex_name(face.arcs.0),
            q.vertex_name(face.arcs.1),
        ));
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}
