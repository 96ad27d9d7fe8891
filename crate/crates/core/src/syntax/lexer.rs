use super::parser::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    At,
    Dot,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    Bang,
    Pipe,
    Amp,
    Arrow,
    DoubleArrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::At => "'@'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Comma => "','".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LAngle => "'<'".into(),
            Tok::RAngle => "'>'".into(),
            Tok::Bang => "'!'".into(),
            Tok::Pipe => "'|'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::DoubleArrow => "'<->'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '#' | '$' | '\'')
}

/// Splits input into tokens. `--` starts a comment running to end of line.
/// An identifier containing `#` may carry a parenthesised suffix, as in `#(y1)`.
pub(crate) fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let adv = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            adv(1, &mut i, &mut col);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let single = match c {
            '@' => Some(Tok::At),
            '.' => Some(Tok::Dot),
            ',' => Some(Tok::Comma),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '>' => Some(Tok::RAngle),
            '!' | '~' => Some(Tok::Bang),
            '|' => Some(Tok::Pipe),
            '&' => Some(Tok::Amp),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: tl, col: tc });
            adv(1, &mut i, &mut col);
            continue;
        }
        if c == '<' {
            if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                out.push(Spanned { tok: Tok::DoubleArrow, line: tl, col: tc });
                adv(3, &mut i, &mut col);
            } else {
                out.push(Spanned { tok: Tok::LAngle, line: tl, col: tc });
                adv(1, &mut i, &mut col);
            }
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Spanned { tok: Tok::Arrow, line: tl, col: tc });
            adv(2, &mut i, &mut col);
            continue;
        }
        if is_ident_char(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let mut s: String = chars[start..i].iter().collect();
            if s.contains('#') && chars.get(i) == Some(&'(') {
                let mut j = i + 1;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                if chars.get(j) == Some(&')') && j > i + 1 {
                    s.extend(&chars[i..=j]);
                    i = j + 1;
                }
            }
            col += i - start;
            out.push(Spanned { tok: Tok::Ident(s), line: tl, col: tc });
            continue;
        }
        return Err(ParseError {
            line: tl,
            col: tc,
            message: format!("unexpected character '{c}'"),
        });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}
