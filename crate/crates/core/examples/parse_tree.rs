//! Parses a small xUnit file and prints its syntax tree outline.
//!
//! `cargo run --example parse_tree [FILE]`

use xnose::syntax::{parse_text, SyntaxNode};

const SAMPLE: &str = r#"using Xunit;

namespace Demo
{
    public class CalculatorTests
    {
        [Fact]
        public void Add_ReturnsSum()
        {
            var sum = Calculator.Add(2, 3);
            Assert.Equal(5, sum);
        }
    }
}
"#;

fn outline(node: &SyntaxNode, depth: usize, out: &mut String) {
    let text = node.normalized_text();
    let preview = if text.len() > 40 { format!("{}...", &text[..text.floor_char_boundary(37)]) } else { text };
    let (line, col) = node.line_col();
    out.push_str(&format!("{:indent$}{:?} @{line}:{col}  {preview}\n", "", node.kind(), indent = depth * 2));
    for child in node.children() {
        outline(&child, depth + 1, out);
    }
}

pub fn run_example(path: &str, text: &str) -> String {
    let (tree, diagnostics) = parse_text(path, text);
    let mut out = String::new();
    outline(&tree.root(), 0, &mut out);
    for d in diagnostics {
        out.push_str(&format!("diagnostic: {d:?}\n"));
    }
    out
}

fn main() {
    let (path, text) = match std::env::args().nth(1) {
        Some(p) => {
            let text = std::fs::read_to_string(&p).expect("readable file");
            (p, text)
        }
        None => ("CalculatorTests.cs".to_string(), SAMPLE.to_string()),
    };
    print!("{}", run_example(&path, &text));
}
