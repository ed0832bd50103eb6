use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Word(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Dot,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Str(_) => "string".to_string(),
            Tok::LBrace => "`{`".to_string(),
            Tok::RBrace => "`}`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Dot => "`.`".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

fn is_word_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '/' => {
                bump!();
                if chars.peek() == Some(&'/') {
                    while !matches!(chars.peek(), None | Some('\n')) {
                        bump!();
                    }
                } else {
                    return Err(ParseError::syntax(pos, "`//` comment", "`/`"));
                }
            }
            '{' | '}' | '(' | ')' | ',' | '.' => {
                bump!();
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    _ => Tok::Dot,
                };
                out.push(Token { tok, pos });
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    let here = Pos { line, column };
                    match bump!() {
                        None => {
                            return Err(ParseError::syntax(here, "closing `\"`", "end of input"))
                        }
                        Some('"') => break,
                        Some('\\') => match bump!() {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            Some(other) => {
                                return Err(ParseError::syntax(
                                    here,
                                    "`\\\"` or `\\\\` escape",
                                    format!("`\\{other}`"),
                                ))
                            }
                            None => {
                                return Err(ParseError::syntax(
                                    here,
                                    "escape character",
                                    "end of input",
                                ))
                            }
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                out.push(Token {
                    tok: Tok::Str(s),
                    pos,
                });
            }
            c if is_word_start(c) => {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_word_char(c) {
                        break;
                    }
                    w.push(c);
                    bump!();
                }
                out.push(Token {
                    tok: Tok::Word(w),
                    pos,
                });
            }
            other => {
                return Err(ParseError::syntax(pos, "token", format!("`{other}`")));
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, column },
    });
    Ok(out)
}
