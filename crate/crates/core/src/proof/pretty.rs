//! Two-dimensional ASCII rendering of proof trees.

use super::Proof;

struct Block {
    lines: Vec<String>,
    width: usize,
}

const GAP: usize = 3;

fn render(p: &Proof) -> Block {
    let conc = p.conclusion.to_string();
    let label = p.rule.name();
    let subs: Vec<Block> = p.premises.iter().map(render).collect();

    // premises side by side, aligned at the bottom
    let height = subs.iter().map(|b| b.lines.len()).max().unwrap_or(0);
    let mut top: Vec<String> = vec![String::new(); height];
    for (k, b) in subs.iter().enumerate() {
        let off = height - b.lines.len();
        for (row, line) in top.iter_mut().enumerate() {
            if k > 0 {
                line.push_str(&" ".repeat(GAP));
            }
            let text = if row >= off { b.lines[row - off].as_str() } else { "" };
            line.push_str(&format!("{text:<w$}", w = b.width));
        }
    }
    let top_width = if subs.is_empty() { 0 } else { subs.iter().map(|b| b.width).sum::<usize>() + GAP * (subs.len() - 1) };

    let bar = top_width.max(conc.len());
    let mut lines = Vec::with_capacity(height + 2);
    let shift = (bar - top_width) / 2;
    for line in top {
        lines.push(format!("{}{}", " ".repeat(shift), line));
    }
    lines.push(format!("{} {label}", "-".repeat(bar)));
    lines.push(format!("{}{}", " ".repeat((bar - conc.len()) / 2), conc));
    let width = bar + 1 + label.len();
    Block { lines, width }
}

/// Renders `p` as a tree with the conclusion on the last line.
pub fn pretty(p: &Proof) -> String {
    let block = render(p);
    let mut out = String::new();
    for line in block.lines {
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
