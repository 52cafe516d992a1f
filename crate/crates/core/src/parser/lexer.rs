use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub(super) enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
    Plus,
    Minus,
    Star,
    Tilde,
    Number(f64),
    Ident(String),
    Globally,
    Eventually,
    Until,
    True,
    False,
    Inf,
    Abs,
    Eof,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Number(n) => format!("number {n}"),
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::Eof => "end of input".to_owned(),
            other => format!("`{}`", other.text()),
        }
    }

    pub(super) fn text(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Bang => "!",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::EqEq => "==",
            Tok::Ne => "!=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Tilde => "~",
            Tok::Globally => "G",
            Tok::Eventually => "F",
            Tok::Until => "U",
            Tok::True => "true",
            Tok::False => "false",
            Tok::Inf => "inf",
            Tok::Abs => "abs",
            Tok::Number(_) => "number",
            Tok::Ident(_) => "identifier",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(super) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub(super) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |next: u8| bytes.get(i + 1) == Some(&next);
        let (tok, len) = match c {
            b'(' => (Tok::LParen, 1),
            b')' => (Tok::RParen, 1),
            b'[' => (Tok::LBracket, 1),
            b']' => (Tok::RBracket, 1),
            b',' => (Tok::Comma, 1),
            b'&' => (Tok::Amp, 1),
            b'|' => (Tok::Pipe, 1),
            b'+' => (Tok::Plus, 1),
            b'*' => (Tok::Star, 1),
            b'~' => (Tok::Tilde, 1),
            b'-' if two(b'>') => (Tok::Arrow, 2),
            b'-' => (Tok::Minus, 1),
            b'!' if two(b'=') => (Tok::Ne, 2),
            b'!' => (Tok::Bang, 1),
            b'<' if two(b'=') => (Tok::Le, 2),
            b'<' => (Tok::Lt, 1),
            b'>' if two(b'=') => (Tok::Ge, 2),
            b'>' => (Tok::Gt, 1),
            b'=' if two(b'=') => (Tok::EqEq, 2),
            b'=' => {
                return Err(ParseError::new(
                    "single `=` is not an operator",
                    SourceSpan::new(start, start + 1),
                    vec!["`==`".into()],
                ))
            }
            b'0'..=b'9' => {
                let len = number_len(&bytes[i..]);
                let text = &src[i..i + len];
                let value: f64 = text.parse().map_err(|_| {
                    ParseError::new(
                        format!("malformed number `{text}`"),
                        SourceSpan::new(start, start + len),
                        vec!["number".into()],
                    )
                })?;
                if !value.is_finite() {
                    return Err(ParseError::new(
                        format!("number `{text}` is out of range"),
                        SourceSpan::new(start, start + len),
                        vec!["number".into()],
                    ));
                }
                (Tok::Number(value), len)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let len = bytes[i..]
                    .iter()
                    .take_while(|b| b.is_ascii_alphanumeric() || **b == b'_')
                    .count();
                let word = &src[i..i + len];
                let tok = match word {
                    "G" => Tok::Globally,
                    "F" => Tok::Eventually,
                    "U" => Tok::Until,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "inf" => Tok::Inf,
                    "abs" => Tok::Abs,
                    _ => Tok::Ident(word.to_owned()),
                };
                (tok, len)
            }
            _ => {
                let len = src[i..].chars().next().map_or(1, char::len_utf8);
                return Err(ParseError::new(
                    format!("unexpected character `{}`", &src[i..i + len]),
                    SourceSpan::new(start, start + len),
                    Vec::new(),
                ));
            }
        };
        out.push(Token {
            tok,
            span: SourceSpan::new(start, start + len),
        });
        i += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan::new(src.len(), src.len()),
    });
    Ok(out)
}

/// Length of `digits ('.' digits)? ([eE] [+-]? digits)?` at the start of `bytes`.
fn number_len(bytes: &[u8]) -> usize {
    let digits = |from: usize| {
        bytes[from..]
            .iter()
            .take_while(|b| b.is_ascii_digit())
            .count()
    };
    let mut len = digits(0);
    if bytes.get(len) == Some(&b'.') && bytes.get(len + 1).is_some_and(u8::is_ascii_digit) {
        len += 1 + digits(len + 1);
    }
    if matches!(bytes.get(len), Some(b'e' | b'E')) {
        let mut exp = len + 1;
        if matches!(bytes.get(exp), Some(b'+' | b'-')) {
            exp += 1;
        }
        let exp_digits = digits(exp);
        if exp_digits > 0 {
            len = exp + exp_digits;
        }
    }
    len
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn lexes_operators_by_longest_match() {
        assert_eq!(
            toks("a->b != c <= -1"),
            vec![
                Tok::Ident("a".into()),
                Tok::Arrow,
                Tok::Ident("b".into()),
                Tok::Ne,
                Tok::Ident("c".into()),
                Tok::Le,
                Tok::Minus,
                Tok::Number(1.0),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn lexes_numbers() {
        assert_eq!(toks("1.5e-3")[0], Tok::Number(1.5e-3));
        assert_eq!(toks("7e")[..2], [Tok::Number(7.0), Tok::Ident("e".into())]);
        assert!(tokenize("3.").is_err());
        assert!(tokenize("1e999").is_err());
    }

    #[test]
    fn keywords_are_case_sensitive_whole_words() {
        assert_eq!(
            toks("G g Gx")[..3],
            [
                Tok::Globally,
                Tok::Ident("g".into()),
                Tok::Ident("Gx".into())
            ]
        );
    }

    #[test]
    fn reports_bad_characters_with_span() {
        let err = tokenize("x < é").unwrap_err();
        assert_eq!(err.span, SourceSpan::new(4, 6));
        assert!(tokenize("x = 1").is_err());
    }
}
