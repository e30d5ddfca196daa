//! Newick text format.
//!
//! Serialization orders the children of every node by their smallest leaf
//! label and writes branch lengths with at most 12 significant digits, so
//! equal trees always produce identical strings. Parsing accepts quoted
//! labels, `[...]` comments, missing branch lengths (read as 0) and
//! multifurcating nodes.

use super::{Node, NodeId, PhyloError, Tree};

const SIGNIFICANT_DIGITS: i32 = 12;

/// Decimal literal with at most 12 significant digits and no trailing zeros.
pub fn format_length(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS - 1 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn needs_quotes(label: &str) -> bool {
    label.is_empty()
        || label
            .chars()
            .any(|c| c.is_whitespace() || "()[]':;,".contains(c))
}

fn write_label(out: &mut String, label: &str) {
    if needs_quotes(label) {
        out.push('\'');
        out.push_str(&label.replace('\'', "''"));
        out.push('\'');
    } else {
        out.push_str(label);
    }
}

pub fn newick_serialize(t: &Tree) -> String {
    // smallest leaf label below each node
    let mut key: Vec<String> = vec![String::new(); t.nodes().len()];
    for id in t.postorder() {
        let node = t.node(id);
        key[id] = if node.is_leaf() {
            node.label.clone().unwrap_or_default()
        } else {
            node.children
                .iter()
                .map(|&c| key[c].clone())
                .min()
                .unwrap_or_default()
        };
    }
    let mut out = String::new();
    write_node(t, t.root(), &key, &mut out);
    let root_length = t.node(t.root()).length;
    if root_length != 0.0 {
        out.push(':');
        out.push_str(&format_length(root_length));
    }
    out.push(';');
    out
}

fn write_node(t: &Tree, id: NodeId, key: &[String], out: &mut String) {
    let node = t.node(id);
    if !node.is_leaf() {
        let mut children = node.children.clone();
        children.sort_by(|&a, &b| key[a].cmp(&key[b]));
        out.push('(');
        for (k, &c) in children.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            write_node(t, c, key, out);
            out.push(':');
            out.push_str(&format_length(t.node(c).length));
        }
        out.push(')');
    }
    if let Some(label) = &node.label {
        write_label(out, label);
    }
}

pub fn newick_parse(s: &str) -> Result<Tree, PhyloError> {
    let mut p = Parser {
        src: s,
        pos: 0,
        nodes: Vec::new(),
    };
    let root = p.subtree()?;
    p.skip_ws();
    if p.eat(':') {
        p.nodes[root].length = p.length()?;
        p.skip_ws();
    }
    if !p.eat(';') {
        return Err(p.error("expected ';'"));
    }
    p.skip_ws();
    if p.pos < s.len() {
        return Err(p.error("unexpected text after ';'"));
    }
    Tree::from_nodes(p.nodes, root)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    nodes: Vec<Node>,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> PhyloError {
        PhyloError::Parse {
            position: self.pos,
            message: message.to_owned(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => self.pos += c.len_utf8(),
                Some('[') => match self.src[self.pos..].find(']') {
                    Some(end) => self.pos += end + 1,
                    None => {
                        self.pos = self.src.len();
                        return;
                    }
                },
                _ => return,
            }
        }
    }

    fn subtree(&mut self) -> Result<NodeId, PhyloError> {
        self.skip_ws();
        let mut children = Vec::new();
        if self.eat('(') {
            loop {
                let child = self.subtree()?;
                self.skip_ws();
                if self.eat(':') {
                    self.nodes[child].length = self.length()?;
                    self.skip_ws();
                }
                children.push(child);
                if self.eat(',') {
                    continue;
                }
                if self.eat(')') {
                    break;
                }
                return Err(self.error("expected ',' or ')'"));
            }
            if children.len() < 2 {
                return Err(self.error("internal node with a single child"));
            }
        }
        self.skip_ws();
        let label = self.label()?;
        if children.is_empty() && label.is_none() {
            return Err(self.error("expected a leaf label or '('"));
        }
        self.nodes.push(Node {
            parent: None,
            children,
            label,
            length: 0.0,
        });
        Ok(self.nodes.len() - 1)
    }

    fn label(&mut self) -> Result<Option<String>, PhyloError> {
        if self.eat('\'') {
            let mut out = String::new();
            loop {
                match self.peek() {
                    None => return Err(self.error("unterminated quoted label")),
                    Some('\'') => {
                        self.pos += 1;
                        if self.eat('\'') {
                            out.push('\'');
                        } else {
                            return Ok(Some(out));
                        }
                    }
                    Some(c) => {
                        out.push(c);
                        self.pos += c.len_utf8();
                    }
                }
            }
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || "()[]':;,".contains(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        Ok((self.pos > start).then(|| self.src[start..self.pos].to_owned()))
    }

    fn length(&mut self) -> Result<f64, PhyloError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || "+-.eE".contains(c) {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = &self.src[start..self.pos];
        let value: f64 = text.parse().map_err(|_| PhyloError::Parse {
            position: start,
            message: format!("invalid branch length {text:?}"),
        })?;
        if !(value.is_finite() && value >= 0.0) {
            return Err(PhyloError::Parse {
                position: start,
                message: format!("branch length must be finite and non-negative, got {text}"),
            });
        }
        Ok(value)
    }
}
