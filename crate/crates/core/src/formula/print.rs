use super::Formula;

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Not(_) => 3,
        Formula::Var(_) | Formula::Top | Formula::Bot => 4,
    }
}

fn write(f: &Formula, out: &mut String) {
    match f {
        Formula::Var(name) => out.push_str(name),
        Formula::Top => out.push_str("top"),
        Formula::Bot => out.push_str("bot"),
        Formula::Not(c) => {
            out.push('!');
            wrapped(c, precedence(c) < 3, out);
        }
        Formula::And(l, r) | Formula::Or(l, r) => {
            let p = precedence(f);
            wrapped(l, precedence(l) < p, out);
            out.push_str(if p == 1 { " | " } else { " & " });
            // left associative: an equal-precedence right operand needs parens
            wrapped(r, precedence(r) <= p, out);
        }
    }
}

fn wrapped(f: &Formula, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write(f, out);
        out.push(')');
    } else {
        write(f, out);
    }
}

/// Canonical ASCII rendering with the minimum parentheses needed to parse
/// back to the same tree.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write(f, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{mk_p, parse};

    fn v(n: &str) -> Formula {
        Formula::var(n)
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(print(&Formula::and(v("a"), v("b"))), "a & b");
        assert_eq!(print(&Formula::not(Formula::and(v("a"), v("b")))), "!(a & b)");
        assert_eq!(print(&mk_p("a", "b")), "(a | !b) & b");
        assert_eq!(print(&Formula::not(Formula::not(v("a")))), "!!a");
        assert_eq!(print(&Formula::not(Formula::Top)), "!top");
        assert_eq!(print(&Formula::and(v("a"), Formula::and(v("b"), v("c")))), "a & (b & c)");
        assert_eq!(print(&Formula::and(Formula::and(v("a"), v("b")), v("c"))), "a & b & c");
        assert_eq!(print(&Formula::or(v("a"), Formula::and(v("b"), v("c")))), "a | b & c");
    }

    #[test]
    fn unicode_input_prints_ascii() {
        assert_eq!(print(&parse("¬(a ∨ ⊥) ∧ ⊤").unwrap()), "!(a | bot) & top");
    }
}
