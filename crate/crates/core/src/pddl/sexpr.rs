//! Minimal s-expression reader with source positions.

use super::error::PddlError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone)]
pub enum Sexpr {
    Atom(String, Pos),
    List(Vec<Sexpr>, Pos),
}

impl Sexpr {
    pub fn pos(&self) -> Pos {
        match self {
            Sexpr::Atom(_, p) | Sexpr::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexpr::Atom(s, _) => Some(s),
            Sexpr::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexpr]> {
        match self {
            Sexpr::List(items, _) => Some(items),
            Sexpr::Atom(..) => None,
        }
    }

    /// Short rendering used in error messages.
    pub fn describe(&self) -> String {
        match self {
            Sexpr::Atom(s, _) => format!("`{s}`"),
            Sexpr::List(items, _) => match items.first().and_then(Sexpr::as_atom) {
                Some(head) => format!("`({head} ...)`"),
                None => "a list".to_string(),
            },
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Reader<'_> {
    fn pos(&self) -> Pos {
        Pos { line: self.line, column: self.column }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Option<Sexpr>, PddlError> {
        self.skip_trivia();
        let start = self.pos();
        match self.chars.peek().copied() {
            None => Ok(None),
            Some(')') => Err(PddlError::syntax(start, "an expression", "`)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(PddlError::syntax(self.pos(), "`)`", "end of input")),
                        Some(')') => {
                            self.bump();
                            return Ok(Some(Sexpr::List(items, start)));
                        }
                        Some(_) => {
                            let item = self.read()?.expect("non-empty input");
                            items.push(item);
                        }
                    }
                }
            }
            Some(_) => {
                let mut token = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    if !(c.is_ascii_graphic()) {
                        return Err(PddlError::syntax(self.pos(), "an identifier character", &format!("`{c}`")));
                    }
                    token.push(c);
                    self.bump();
                }
                Ok(Some(Sexpr::Atom(token, start)))
            }
        }
    }
}

pub fn read_all(text: &str) -> Result<Vec<Sexpr>, PddlError> {
    let mut reader = Reader { chars: text.chars().peekable(), line: 1, column: 1 };
    let mut out = Vec::new();
    while let Some(expr) = reader.read()? {
        out.push(expr);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let exprs = read_all("(a (b c)) ; comment\n(d)").unwrap();
        assert_eq!(exprs.len(), 2);
        assert_eq!(exprs[1].pos(), Pos { line: 2, column: 1 });
        let inner = &exprs[0].as_list().unwrap()[1];
        assert_eq!(inner.pos(), Pos { line: 1, column: 4 });
    }

    #[test]
    fn unbalanced_input_reports_position() {
        let err = read_all("(a (b)").unwrap_err();
        match err {
            PddlError::Syntax { line, column, .. } => assert_eq!((line, column), (1, 7)),
            other => panic!("{other:?}"),
        }
        assert!(read_all(")").is_err());
    }
}
