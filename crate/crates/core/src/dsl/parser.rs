use super::lexer::{tokenize, Pos, Tok, Token};
use super::ParseError;
use crate::model::{
    Annotations, ConstraintKind, FeatureModel, FeaturePath, GroupKind, ModelError, Variability,
};

struct FeatureDecl {
    variability: Option<Variability>,
    name: String,
    name_pos: Pos,
    annotations: Annotations,
    elements: Vec<Element>,
}

enum Element {
    Feature(FeatureDecl),
    Group {
        kind: GroupKind,
        pos: Pos,
        members: Vec<FeatureDecl>,
    },
}

struct PathRef {
    path: String,
    pos: Pos,
}

struct ConstraintDecl {
    kind: ConstraintKind,
    lhs: PathRef,
    rhs: PathRef,
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError::syntax(t.pos, expected, t.tok.describe()))
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(&self.peek().tok, Tok::Word(x) if x == w)
    }

    fn keyword(&mut self, w: &str) -> Result<Pos, ParseError> {
        if self.is_word(w) {
            Ok(self.next().pos)
        } else {
            self.fail(&format!("`{w}`"))
        }
    }

    fn punct(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        if self.peek().tok == tok {
            Ok(self.next().pos)
        } else {
            self.fail(&tok.describe())
        }
    }

    fn string(&mut self) -> Result<String, ParseError> {
        match &self.peek().tok {
            Tok::Str(_) => match self.next().tok {
                Tok::Str(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => self.fail("string"),
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match &self.peek().tok {
            Tok::Word(_) => {
                let t = self.next();
                match t.tok {
                    Tok::Word(w) => Ok((w, t.pos)),
                    _ => unreachable!(),
                }
            }
            _ => self.fail("identifier"),
        }
    }

    fn model(&mut self) -> Result<(String, FeatureDecl, Vec<ConstraintDecl>), ParseError> {
        self.keyword("model")?;
        let name = self.string()?;
        self.punct(Tok::LBrace)?;
        let root = self.feature(false)?;
        let mut constraints = Vec::new();
        if self.is_word("constraints") {
            self.next();
            self.punct(Tok::LBrace)?;
            while self.peek().tok != Tok::RBrace {
                constraints.push(self.constraint()?);
            }
            self.next();
        }
        self.punct(Tok::RBrace)?;
        if self.peek().tok != Tok::Eof {
            return self.fail("end of input");
        }
        Ok((name, root, constraints))
    }

    fn feature(&mut self, marker_allowed: bool) -> Result<FeatureDecl, ParseError> {
        let variability = if marker_allowed && self.is_word("mandatory") {
            self.next();
            Some(Variability::Mandatory)
        } else if marker_allowed && self.is_word("optional") {
            self.next();
            Some(Variability::Optional)
        } else {
            None
        };
        self.keyword("feature")?;
        let (name, name_pos) = self.ident()?;
        let annotations = if self.peek().tok == Tok::LParen {
            self.meta()?
        } else {
            Annotations::default()
        };
        let mut elements = Vec::new();
        if self.peek().tok == Tok::LBrace {
            self.next();
            while self.peek().tok != Tok::RBrace {
                elements.push(self.element()?);
            }
            self.next();
        }
        Ok(FeatureDecl {
            variability,
            name,
            name_pos,
            annotations,
            elements,
        })
    }

    fn meta(&mut self) -> Result<Annotations, ParseError> {
        self.punct(Tok::LParen)?;
        let mut ann = Annotations::default();
        if self.is_word("fullname") {
            self.next();
            ann.full_name = Some(self.string()?);
            if self.peek().tok == Tok::Comma {
                self.next();
                self.keyword("desc")?;
                ann.description = Some(self.string()?);
            }
        } else if self.is_word("desc") {
            self.next();
            ann.description = Some(self.string()?);
        } else {
            return self.fail("`fullname` or `desc`");
        }
        self.punct(Tok::RParen)?;
        Ok(ann)
    }

    fn element(&mut self) -> Result<Element, ParseError> {
        let kind = if self.is_word("alt") {
            GroupKind::Alternative
        } else if self.is_word("or") {
            GroupKind::Or
        } else if self.is_word("feature") || self.is_word("mandatory") || self.is_word("optional") {
            return Ok(Element::Feature(self.feature(true)?));
        } else {
            return self.fail("`feature`, `mandatory`, `optional`, `alt`, `or` or `}`");
        };
        let pos = self.next().pos;
        self.punct(Tok::LBrace)?;
        let mut members = Vec::new();
        while self.peek().tok != Tok::RBrace {
            members.push(self.feature(false)?);
        }
        self.next();
        Ok(Element::Group { kind, pos, members })
    }

    fn path(&mut self) -> Result<PathRef, ParseError> {
        let (mut path, pos) = self.ident()?;
        while self.peek().tok == Tok::Dot {
            self.next();
            let (seg, _) = self.ident()?;
            path.push('.');
            path.push_str(&seg);
        }
        Ok(PathRef { path, pos })
    }

    fn constraint(&mut self) -> Result<ConstraintDecl, ParseError> {
        let lhs = self.path()?;
        let kind = if self.is_word("requires") {
            ConstraintKind::Requires
        } else if self.is_word("excludes") {
            ConstraintKind::Excludes
        } else {
            return self.fail("`requires` or `excludes`");
        };
        self.next();
        let rhs = self.path()?;
        Ok(ConstraintDecl { kind, lhs, rhs })
    }
}

fn build_children(
    model: &mut FeatureModel,
    parent: &FeaturePath,
    elements: &[Element],
) -> Result<(), ParseError> {
    for el in elements {
        match el {
            Element::Feature(decl) => {
                model
                    .add_feature(
                        parent.as_str(),
                        &decl.name,
                        decl.variability.unwrap_or(Variability::Optional),
                        decl.annotations.clone(),
                    )
                    .map_err(|e| ParseError::model(decl.name_pos, e))?;
                build_children(model, &parent.child(&decl.name), &decl.elements)?;
            }
            Element::Group { kind, pos, members } => {
                let children: Vec<_> = members
                    .iter()
                    .map(|m| (m.name.as_str(), m.annotations.clone()))
                    .collect();
                if let Err(e) = model.add_group_annotated(parent.as_str(), *kind, &children) {
                    let at = match &e {
                        ModelError::DuplicateSibling { name, .. } => members
                            .iter()
                            .rfind(|m| &m.name == name)
                            .map_or(*pos, |m| m.name_pos),
                        _ => *pos,
                    };
                    return Err(ParseError::model(at, e));
                }
                for m in members {
                    build_children(model, &parent.child(&m.name), &m.elements)?;
                }
            }
        }
    }
    Ok(())
}

pub fn parse_model(source: &str) -> Result<FeatureModel, ParseError> {
    let toks = tokenize(source)?;
    let mut p = Parser { toks, at: 0 };
    let (name, root, constraints) = p.model()?;

    let mut model = FeatureModel::with_root(&name, &root.name, root.annotations.clone())
        .map_err(|e| ParseError::model(root.name_pos, e))?;
    let root_path = FeaturePath::new(&root.name);
    build_children(&mut model, &root_path, &root.elements)?;

    for c in constraints {
        model
            .add_constraint(c.kind, &c.lhs.path, &c.rhs.path)
            .map_err(|e| {
                let at = match &e {
                    ModelError::DanglingConstraint(p)
                        if p.as_str() == c.rhs.path && model.lookup(&c.lhs.path).is_some() =>
                    {
                        c.rhs.pos
                    }
                    _ => c.lhs.pos,
                };
                ParseError::model(at, e)
            })?;
    }
    Ok(model)
}
