//! S-expression reader. Symbols are case-folded to lowercase; `;` starts a
//! comment that runs to the end of the line.

use super::error::{PddlError, Pos};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Sexp {
    Atom { text: String, pos: Pos },
    List { items: Vec<Sexp>, pos: Pos },
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom { pos, .. } | Sexp::List { pos, .. } => *pos,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom { text, .. } => Some(text),
            Sexp::List { .. } => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Some(items),
            Sexp::Atom { .. } => None,
        }
    }

    /// Head symbol of a list, if it has one.
    pub fn head(&self) -> Option<&str> {
        self.as_list().and_then(|items| items.first()).and_then(Sexp::as_atom)
    }

    pub fn expect_atom(&self, what: &str) -> Result<&str, PddlError> {
        self.as_atom().ok_or_else(|| PddlError::syntax(self.pos(), format!("expected {what}, found a list")))
    }

    pub fn expect_list(&self, what: &str) -> Result<&[Sexp], PddlError> {
        self.as_list().ok_or_else(|| {
            PddlError::syntax(self.pos(), format!("expected {what}, found '{}'", self.as_atom().unwrap_or("")))
        })
    }
}

pub(crate) fn read_all(text: &str) -> Result<Vec<Sexp>, PddlError> {
    let mut stack: Vec<(Pos, Vec<Sexp>)> = Vec::new();
    let mut top = Vec::new();
    let mut line = 1;
    let mut column = 0;
    let mut chars = text.chars().peekable();
    let mut token = String::new();
    let mut token_pos = Pos::default();

    fn flush(token: &mut String, pos: Pos, stack: &mut [(Pos, Vec<Sexp>)], top: &mut Vec<Sexp>) {
        if token.is_empty() {
            return;
        }
        let atom = Sexp::Atom { text: token.to_lowercase(), pos };
        token.clear();
        match stack.last_mut() {
            Some((_, items)) => items.push(atom),
            None => top.push(atom),
        }
    }

    while let Some(c) = chars.next() {
        if c == '\n' {
            flush(&mut token, token_pos, &mut stack, &mut top);
            line += 1;
            column = 0;
            continue;
        }
        column += 1;
        let here = Pos { line, column };
        match c {
            ';' => {
                flush(&mut token, token_pos, &mut stack, &mut top);
                while let Some(&n) = chars.peek() {
                    if n == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => {
                flush(&mut token, token_pos, &mut stack, &mut top);
                stack.push((here, Vec::new()));
            }
            ')' => {
                flush(&mut token, token_pos, &mut stack, &mut top);
                let (pos, items) =
                    stack.pop().ok_or_else(|| PddlError::syntax(here, "unexpected ')' without matching '('"))?;
                let list = Sexp::List { items, pos };
                match stack.last_mut() {
                    Some((_, items)) => items.push(list),
                    None => top.push(list),
                }
            }
            c if c.is_whitespace() => flush(&mut token, token_pos, &mut stack, &mut top),
            c => {
                if token.is_empty() {
                    token_pos = here;
                }
                token.push(c);
            }
        }
    }
    flush(&mut token, token_pos, &mut stack, &mut top);
    if let Some((pos, _)) = stack.last() {
        return Err(PddlError::syntax(*pos, "unclosed '(': unbalanced parentheses"));
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_and_folds_case() {
        let v = read_all("(Define (Domain X)) ; trailing comment (").unwrap();
        assert_eq!(v.len(), 1);
        let items = v[0].as_list().unwrap();
        assert_eq!(items[0].as_atom(), Some("define"));
        assert_eq!(items[1].head(), Some("domain"));
    }

    #[test]
    fn positions_are_one_based() {
        let v = read_all("\n  (a b)").unwrap();
        assert_eq!(v[0].pos(), Pos { line: 2, column: 3 });
        let items = v[0].as_list().unwrap();
        assert_eq!(items[1].pos(), Pos { line: 2, column: 6 });
    }

    #[test]
    fn unbalanced_input_is_positioned() {
        match read_all("(a\n (b c)").unwrap_err() {
            PddlError::Syntax { line, column, .. } => assert_eq!((line, column), (1, 1)),
            e => panic!("unexpected {e:?}"),
        }
        match read_all("(a))").unwrap_err() {
            PddlError::Syntax { line, column, .. } => assert_eq!((line, column), (1, 4)),
            e => panic!("unexpected {e:?}"),
        }
    }
}
