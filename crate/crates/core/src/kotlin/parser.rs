//! Recursive-descent parser for the Kotlin-style subset with
//! single-token lookahead. Unrecognized constructs inside declaration
//! bodies are skipped token-balanced with a diagnostic, never a crash.

use crate::kotlin::ast::*;
use crate::lexer::{ParseError, TokenCursor, TokenKind};
use crate::model::Diagnostic;

const MODIFIERS: [&str; 18] = [
    "public",
    "private",
    "protected",
    "internal",
    "open",
    "final",
    "abstract",
    "override",
    "data",
    "sealed",
    "lateinit",
    "const",
    "inline",
    "operator",
    "infix",
    "suspend",
    "tailrec",
    "external",
];

const BINARY_OPS: [&str; 16] = [
    "+", "-", "*", "/", "%", "<", ">", "<=", ">=", "==", "!=", "&&", "||", "?:", "..", "?",
];

pub fn parse_kotlin(source: &str, path: &str) -> Result<(KtFile, Vec<Diagnostic>), ParseError> {
    let mut parser = KtParser {
        cur: TokenCursor::new(source, path)?,
        diagnostics: Vec::new(),
    };
    let file = parser.parse_file()?;
    Ok((file, parser.diagnostics))
}

struct KtParser<'a> {
    cur: TokenCursor<'a>,
    diagnostics: Vec<Diagnostic>,
}

impl<'a> KtParser<'a> {
    fn diag(&mut self, line: u32, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic {
            path: self.cur.path.to_string(),
            line,
            message: message.into(),
        });
    }

    fn parse_file(&mut self) -> Result<KtFile, ParseError> {
        let mut file = KtFile {
            package: None,
            imports: Vec::new(),
            decls: Vec::new(),
            end_line: 1,
        };
        if self.cur.peek().is_ident("package") {
            self.cur.advance();
            file.package = Some(self.parse_dotted()?);
            self.cur.eat_punct(";");
        }
        while self.cur.peek().is_ident("import") {
            let line = self.cur.advance().line;
            let (path, wildcard) = self.parse_import_path()?;
            file.imports.push(KtImport {
                path,
                wildcard,
                line,
            });
            self.cur.eat_punct(";");
        }
        while !self.cur.at_eof() {
            if let Some(decl) = self.parse_decl(true)? {
                file.decls.push(decl);
            }
        }
        file.end_line = self.cur.peek().line;
        Ok(file)
    }

    fn parse_dotted(&mut self) -> Result<String, ParseError> {
        let mut name = self.cur.expect_ident()?.text;
        while self.cur.peek().is_punct(".") && self.cur.peek_at(1).kind == TokenKind::Ident {
            self.cur.advance();
            name.push('.');
            name.push_str(&self.cur.advance().text);
        }
        Ok(name)
    }

    fn parse_import_path(&mut self) -> Result<(String, bool), ParseError> {
        let mut name = self.cur.expect_ident()?.text;
        let mut wildcard = false;
        while self.cur.peek().is_punct(".") {
            if self.cur.peek_at(1).is_punct("*") {
                self.cur.advance();
                self.cur.advance();
                wildcard = true;
                break;
            }
            if self.cur.peek_at(1).kind != TokenKind::Ident {
                break;
            }
            self.cur.advance();
            name.push('.');
            name.push_str(&self.cur.advance().text);
        }
        Ok((name, wildcard))
    }

    fn parse_annotations(&mut self) -> Result<Vec<KtAnnotation>, ParseError> {
        let mut annotations = Vec::new();
        while self.cur.peek().is_punct("@") {
            let line = self.cur.advance().line;
            let name = self.parse_dotted()?;
            if self.cur.peek().is_punct("(") {
                self.skip_parenthesized()?;
            }
            annotations.push(KtAnnotation { name, line });
        }
        Ok(annotations)
    }

    /// Consumes modifier keywords; returns whether `annotation` was seen.
    fn parse_modifiers(&mut self) -> bool {
        let mut annotation_class = false;
        loop {
            let t = self.cur.peek();
            if t.kind != TokenKind::Ident {
                return annotation_class;
            }
            if t.text == "annotation" && self.cur.peek_at(1).is_ident("class") {
                annotation_class = true;
                self.cur.advance();
                continue;
            }
            if MODIFIERS.contains(&t.text.as_str()) {
                // Only treat as a modifier when a declaration can follow.
                let next = self.cur.peek_at(1);
                let decl_follows = next.kind == TokenKind::Ident || next.is_punct("@");
                if decl_follows {
                    self.cur.advance();
                    continue;
                }
            }
            return annotation_class;
        }
    }

    /// Parses one declaration; `top_level` admits everything the subset
    /// knows. Returns None when the construct was skipped.
    fn parse_decl(&mut self, top_level: bool) -> Result<Option<KtDecl>, ParseError> {
        let annotations = self.parse_annotations()?;
        let annotation_class = self.parse_modifiers();
        let t = self.cur.peek().clone();
        match t.text.as_str() {
            "class" | "interface" | "object" if t.kind == TokenKind::Ident => {
                let class = self.parse_class(annotations, annotation_class)?;
                Ok(Some(KtDecl::Class(class)))
            }
            "fun" if t.kind == TokenKind::Ident => {
                let fun = self.parse_function(annotations)?;
                Ok(Some(KtDecl::Function(fun)))
            }
            "val" | "var" if t.kind == TokenKind::Ident => {
                let prop = self.parse_property(annotations)?;
                Ok(Some(KtDecl::Property(prop)))
            }
            _ => {
                self.diag(
                    t.line,
                    format!(
                        "skipped unrecognized {} construct",
                        if top_level { "top-level" } else { "member" }
                    ),
                );
                self.cur.skip_balanced()?;
                Ok(None)
            }
        }
    }

    fn parse_class(
        &mut self,
        annotations: Vec<KtAnnotation>,
        annotation_class: bool,
    ) -> Result<KtClass, ParseError> {
        let keyword = self.cur.advance();
        let kind = if annotation_class {
            KtClassKind::AnnotationClass
        } else {
            match keyword.text.as_str() {
                "interface" => KtClassKind::Interface,
                "object" => KtClassKind::Object,
                _ => KtClassKind::Class,
            }
        };
        let name_tok = self.cur.expect_ident()?;
        let mut class = KtClass {
            name: name_tok.text,
            kind,
            annotations,
            ctor_params: Vec::new(),
            supertypes: Vec::new(),
            members: Vec::new(),
            line: keyword.line,
            end_line: name_tok.line,
        };
        if self.cur.peek().is_punct("(") {
            self.cur.advance();
            while !self.cur.peek().is_punct(")") && !self.cur.at_eof() {
                let param = self.parse_ctor_param()?;
                class.ctor_params.push(param);
                if !self.cur.eat_punct(",") {
                    break;
                }
            }
            self.cur.expect_punct(")")?;
        }
        if self.cur.eat_punct(":") {
            loop {
                let line = self.cur.peek().line;
                let name = self.parse_dotted()?;
                if self.cur.peek().is_punct("(") {
                    self.skip_parenthesized()?;
                }
                let delegate = if self.cur.peek().is_ident("by") {
                    self.cur.advance();
                    Some(self.parse_expr()?)
                } else {
                    None
                };
                class.supertypes.push(KtSupertype {
                    name,
                    delegate,
                    line,
                });
                if !self.cur.eat_punct(",") {
                    break;
                }
            }
        }
        if self.cur.peek().is_punct("{") {
            self.cur.advance();
            while !self.cur.peek().is_punct("}") {
                if self.cur.at_eof() {
                    return Err(ParseError::new(
                        self.cur.path,
                        class.line,
                        1,
                        format!("unclosed body of `{}`", class.name),
                    ));
                }
                if let Some(member) = self.parse_decl(false)? {
                    class.members.push(member);
                }
            }
            class.end_line = self.cur.advance().line;
        }
        Ok(class)
    }

    fn parse_ctor_param(&mut self) -> Result<KtCtorParam, ParseError> {
        let _ = self.parse_annotations()?;
        self.parse_modifiers();
        let mut binding = KtBinding::None;
        if self.cur.peek().is_ident("val") {
            binding = KtBinding::Val;
            self.cur.advance();
        } else if self.cur.peek().is_ident("var") {
            binding = KtBinding::Var;
            self.cur.advance();
        } else if self.cur.peek().is_ident("vararg") {
            self.cur.advance();
        }
        let name_tok = self.cur.expect_ident()?;
        self.cur.expect_punct(":")?;
        let ty = self.parse_type_use()?;
        if self.cur.eat_punct("=") {
            self.skip_default_value()?;
        }
        Ok(KtCtorParam {
            name: name_tok.text,
            ty,
            binding,
            line: name_tok.line,
        })
    }

    fn parse_function(&mut self, annotations: Vec<KtAnnotation>) -> Result<KtFunction, ParseError> {
        let fun_tok = self.cur.advance();
        // Dotted prefix before the parameter list is the receiver type.
        let mut segments = vec![self.cur.expect_ident()?];
        while self.cur.peek().is_punct(".") && self.cur.peek_at(1).kind == TokenKind::Ident {
            self.cur.advance();
            segments.push(self.cur.advance());
        }
        let name_tok = segments.pop().unwrap();
        let receiver = if segments.is_empty() {
            None
        } else {
            Some(KtTypeName {
                name: segments
                    .iter()
                    .map(|t| t.text.clone())
                    .collect::<Vec<_>>()
                    .join("."),
                line: segments[0].line,
            })
        };
        self.cur.expect_punct("(")?;
        let mut params = Vec::new();
        while !self.cur.peek().is_punct(")") && !self.cur.at_eof() {
            let _ = self.parse_annotations()?;
            self.parse_modifiers();
            if self.cur.peek().is_ident("vararg") {
                self.cur.advance();
            }
            let pname = self.cur.expect_ident()?;
            self.cur.expect_punct(":")?;
            let ty = self.parse_type_use()?;
            if self.cur.eat_punct("=") {
                self.skip_default_value()?;
            }
            params.push(KtParam {
                name: pname.text,
                ty,
                line: pname.line,
            });
            if !self.cur.eat_punct(",") {
                break;
            }
        }
        self.cur.expect_punct(")")?;
        let return_type = if self.cur.eat_punct(":") {
            Some(self.parse_type_name()?)
        } else {
            None
        };
        let end_line;
        let body = if self.cur.peek().is_punct("{") {
            let (stmts, close_line) = self.parse_block()?;
            end_line = close_line;
            Some(KtBody::Block(stmts))
        } else if self.cur.eat_punct("=") {
            let expr = self.parse_expr()?;
            end_line = expr.line();
            Some(KtBody::Expr(expr))
        } else {
            end_line = name_tok.line;
            None
        };
        Ok(KtFunction {
            name: name_tok.text,
            receiver,
            params,
            return_type,
            body,
            annotations,
            line: fun_tok.line,
            end_line,
        })
    }

    fn parse_property(&mut self, annotations: Vec<KtAnnotation>) -> Result<KtProperty, ParseError> {
        let kw = self.cur.advance();
        let mutable = kw.text == "var";
        let name_tok = self.cur.expect_ident()?;
        let ty = if self.cur.eat_punct(":") {
            Some(self.parse_type_name()?)
        } else {
            None
        };
        let mut init = None;
        let mut delegate = None;
        if self.cur.eat_punct("=") {
            init = Some(self.parse_expr()?);
        } else if self.cur.peek().is_ident("by") {
            self.cur.advance();
            delegate = Some(self.parse_expr()?);
        }
        Ok(KtProperty {
            name: name_tok.text,
            mutable,
            ty,
            init,
            delegate,
            annotations,
            line: kw.line,
        })
    }

    /// Plain dotted type name; a trailing `?` nullability marker is
    /// consumed and dropped.
    fn parse_type_name(&mut self) -> Result<KtTypeName, ParseError> {
        let line = self.cur.peek().line;
        let name = self.parse_dotted()?;
        self.cur.eat_punct("?");
        Ok(KtTypeName { name, line })
    }

    fn parse_type_use(&mut self) -> Result<KtTypeUse, ParseError> {
        let line = self.cur.peek().line;
        if self.cur.peek().is_punct("(") {
            return self.parse_function_type(None, line);
        }
        let mut name = self.cur.expect_ident()?.text;
        loop {
            if self.cur.peek().is_punct(".") && self.cur.peek_at(1).is_punct("(") {
                self.cur.advance();
                return self.parse_function_type(Some(KtTypeName { name, line }), line);
            }
            if self.cur.peek().is_punct(".") && self.cur.peek_at(1).kind == TokenKind::Ident {
                self.cur.advance();
                name.push('.');
                name.push_str(&self.cur.advance().text);
                continue;
            }
            break;
        }
        self.cur.eat_punct("?");
        Ok(KtTypeUse::Plain(KtTypeName { name, line }))
    }

    fn parse_function_type(
        &mut self,
        receiver: Option<KtTypeName>,
        line: u32,
    ) -> Result<KtTypeUse, ParseError> {
        self.cur.expect_punct("(")?;
        let mut params = Vec::new();
        while !self.cur.peek().is_punct(")") && !self.cur.at_eof() {
            params.push(self.parse_type_name()?);
            if !self.cur.eat_punct(",") {
                break;
            }
        }
        self.cur.expect_punct(")")?;
        self.cur.expect_punct("->")?;
        let ret = Some(self.parse_type_name()?);
        Ok(KtTypeUse::Function {
            receiver,
            params,
            ret,
            line,
        })
    }

    /// Skips a default-value expression up to the enclosing `,` or `)`.
    fn skip_default_value(&mut self) -> Result<(), ParseError> {
        let mut depth = 0i32;
        loop {
            let t = self.cur.peek().clone();
            match t.kind {
                TokenKind::Eof => {
                    return Err(ParseError::new(
                        self.cur.path,
                        t.line,
                        t.col,
                        "unbalanced delimiters",
                    ))
                }
                TokenKind::Punct => match t.text.as_str() {
                    "(" | "{" | "[" => {
                        depth += 1;
                        self.cur.advance();
                    }
                    ")" | "}" | "]" if depth == 0 => return Ok(()),
                    ")" | "}" | "]" => {
                        depth -= 1;
                        self.cur.advance();
                    }
                    "," if depth == 0 => return Ok(()),
                    _ => {
                        self.cur.advance();
                    }
                },
                _ => {
                    self.cur.advance();
                }
            }
        }
    }

    fn skip_parenthesized(&mut self) -> Result<(), ParseError> {
        let open = self.cur.expect_punct("(")?;
        let mut depth = 1i32;
        while depth > 0 {
            let t = self.cur.advance();
            match t.kind {
                TokenKind::Eof => {
                    return Err(ParseError::new(
                        self.cur.path,
                        open.line,
                        open.col,
                        "unbalanced parentheses",
                    ))
                }
                TokenKind::Punct => match t.text.as_str() {
                    "(" => depth += 1,
                    ")" => depth -= 1,
                    _ => {}
                },
                _ => {}
            }
        }
        Ok(())
    }

    fn parse_block(&mut self) -> Result<(Vec<KtStmt>, u32), ParseError> {
        let open = self.cur.expect_punct("{")?;
        let mut stmts = Vec::new();
        loop {
            if self.cur.peek().is_punct("}") {
                let close = self.cur.advance();
                return Ok((stmts, close.line));
            }
            if self.cur.at_eof() {
                return Err(ParseError::new(
                    self.cur.path,
                    open.line,
                    open.col,
                    "unclosed block",
                ));
            }
            if self.cur.eat_punct(";") {
                continue;
            }
            if let Some(stmt) = self.parse_statement()? {
                stmts.push(stmt);
            }
        }
    }

    fn parse_statement(&mut self) -> Result<Option<KtStmt>, ParseError> {
        let t = self.cur.peek().clone();
        if t.kind == TokenKind::Ident {
            match t.text.as_str() {
                "val" | "var" => {
                    self.cur.advance();
                    let name_tok = self.cur.expect_ident()?;
                    let ty = if self.cur.eat_punct(":") {
                        Some(self.parse_type_name()?)
                    } else {
                        None
                    };
                    let init = if self.cur.eat_punct("=") {
                        Some(self.parse_expr()?)
                    } else {
                        None
                    };
                    return Ok(Some(KtStmt::Local {
                        name: name_tok.text,
                        mutable: t.text == "var",
                        ty,
                        init,
                        line: t.line,
                    }));
                }
                "return" => {
                    self.cur.advance();
                    let next = self.cur.peek();
                    let value =
                        if next.newline_before || next.is_punct("}") || next.kind == TokenKind::Eof
                        {
                            None
                        } else {
                            Some(self.parse_expr()?)
                        };
                    return Ok(Some(KtStmt::Return {
                        value,
                        line: t.line,
                    }));
                }
                "when" | "for" | "do" | "try" | "throw" => {
                    self.diag(t.line, format!("skipped `{}` statement", t.text));
                    self.cur.skip_balanced()?;
                    return Ok(None);
                }
                _ => {}
            }
        }
        let expr = self.parse_expr()?;
        Ok(Some(KtStmt::Expr(expr)))
    }

    fn parse_expr(&mut self) -> Result<KtExpr, ParseError> {
        let first = self.parse_binary_chain()?;
        if self.cur.peek().is_punct("=") {
            let line = self.cur.advance().line;
            let value = self.parse_expr()?;
            return Ok(KtExpr::Assign {
                target: Box::new(first),
                value: Box::new(value),
                line,
            });
        }
        Ok(first)
    }

    fn parse_binary_chain(&mut self) -> Result<KtExpr, ParseError> {
        let first = self.parse_postfix()?;
        if !self.is_binary_op_next() {
            return Ok(first);
        }
        let line = first.line();
        let mut operands = vec![first];
        while self.is_binary_op_next() {
            self.cur.advance();
            operands.push(self.parse_postfix()?);
        }
        Ok(KtExpr::OpChain { operands, line })
    }

    fn is_binary_op_next(&self) -> bool {
        let t = self.cur.peek();
        t.kind == TokenKind::Punct && BINARY_OPS.contains(&t.text.as_str()) && !t.newline_before
    }

    fn parse_postfix(&mut self) -> Result<KtExpr, ParseError> {
        let mut expr = self.parse_primary()?;
        loop {
            let t = self.cur.peek().clone();
            if t.is_punct(".") || t.is_punct("?.") {
                if self.cur.peek_at(1).kind != TokenKind::Ident {
                    break;
                }
                self.cur.advance();
                let name_tok = self.cur.advance();
                expr = KtExpr::Nav {
                    recv: Box::new(expr),
                    name: name_tok.text,
                    line: name_tok.line,
                };
                continue;
            }
            if t.is_punct("(") && !t.newline_before {
                self.cur.advance();
                let mut args = Vec::new();
                while !self.cur.peek().is_punct(")") && !self.cur.at_eof() {
                    args.push(self.parse_expr()?);
                    if !self.cur.eat_punct(",") {
                        break;
                    }
                }
                self.cur.expect_punct(")")?;
                // A directly following lambda is a trailing argument.
                if self.cur.peek().is_punct("{") && !self.cur.peek().newline_before {
                    args.push(self.parse_lambda()?);
                }
                expr = KtExpr::Call {
                    callee: Box::new(expr),
                    args,
                    line: t.line,
                };
                continue;
            }
            if t.is_punct("{") && !t.newline_before && callable_position(&expr) {
                let lambda = self.parse_lambda()?;
                expr = KtExpr::Call {
                    callee: Box::new(expr),
                    args: vec![lambda],
                    line: t.line,
                };
                continue;
            }
            if t.is_ident("as") {
                self.cur.advance();
                self.cur.eat_punct("?"); // `as?` safe cast
                let ty = self.parse_type_name()?;
                expr = KtExpr::Cast {
                    value: Box::new(expr),
                    ty,
                    line: t.line,
                };
                continue;
            }
            if t.is_punct("!!") {
                self.cur.advance();
                continue;
            }
            break;
        }
        Ok(expr)
    }

    fn parse_primary(&mut self) -> Result<KtExpr, ParseError> {
        let t = self.cur.peek().clone();
        match t.kind {
            TokenKind::Int => {
                self.cur.advance();
                Ok(KtExpr::Lit {
                    kind: KtLitKind::Int,
                    line: t.line,
                })
            }
            TokenKind::Long => {
                self.cur.advance();
                Ok(KtExpr::Lit {
                    kind: KtLitKind::Long,
                    line: t.line,
                })
            }
            TokenKind::Double => {
                self.cur.advance();
                Ok(KtExpr::Lit {
                    kind: KtLitKind::Double,
                    line: t.line,
                })
            }
            TokenKind::Float => {
                self.cur.advance();
                Ok(KtExpr::Lit {
                    kind: KtLitKind::Float,
                    line: t.line,
                })
            }
            TokenKind::Str => {
                self.cur.advance();
                Ok(KtExpr::Lit {
                    kind: KtLitKind::Str,
                    line: t.line,
                })
            }
            TokenKind::Char => {
                self.cur.advance();
                Ok(KtExpr::Lit {
                    kind: KtLitKind::Char,
                    line: t.line,
                })
            }
            TokenKind::Ident => match t.text.as_str() {
                "true" | "false" => {
                    self.cur.advance();
                    Ok(KtExpr::Lit {
                        kind: KtLitKind::Boolean,
                        line: t.line,
                    })
                }
                "null" => {
                    self.cur.advance();
                    Ok(KtExpr::Lit {
                        kind: KtLitKind::Null,
                        line: t.line,
                    })
                }
                "if" => self.parse_if(),
                "while" => self.parse_while(),
                "this" => {
                    self.cur.advance();
                    Ok(KtExpr::Unknown { line: t.line })
                }
                _ => {
                    self.cur.advance();
                    Ok(KtExpr::Name {
                        name: t.text,
                        line: t.line,
                    })
                }
            },
            TokenKind::Punct => match t.text.as_str() {
                "(" => {
                    self.cur.advance();
                    let inner = self.parse_expr()?;
                    self.cur.expect_punct(")")?;
                    Ok(inner)
                }
                "{" => self.parse_lambda(),
                "!" | "-" | "+" => {
                    self.cur.advance();
                    let operand = self.parse_postfix()?;
                    Ok(KtExpr::OpChain {
                        operands: vec![operand],
                        line: t.line,
                    })
                }
                _ => {
                    self.diag(
                        t.line,
                        format!("skipped unrecognized expression at `{}`", t.text),
                    );
                    self.cur.skip_balanced()?;
                    Ok(KtExpr::Unknown { line: t.line })
                }
            },
            TokenKind::Eof => Err(ParseError::new(
                self.cur.path,
                t.line,
                t.col,
                "unexpected end of file",
            )),
        }
    }

    fn parse_if(&mut self) -> Result<KtExpr, ParseError> {
        let kw = self.cur.advance();
        self.cur.expect_punct("(")?;
        let cond = self.parse_expr()?;
        self.cur.expect_punct(")")?;
        let then_stmts = self.parse_branch_body()?;
        let else_stmts = if self.cur.peek().is_ident("else") {
            self.cur.advance();
            self.parse_branch_body()?
        } else {
            Vec::new()
        };
        Ok(KtExpr::If {
            cond: Box::new(cond),
            then_stmts,
            else_stmts,
            line: kw.line,
        })
    }

    fn parse_while(&mut self) -> Result<KtExpr, ParseError> {
        let kw = self.cur.advance();
        self.cur.expect_punct("(")?;
        let cond = self.parse_expr()?;
        self.cur.expect_punct(")")?;
        let body = self.parse_branch_body()?;
        Ok(KtExpr::While {
            cond: Box::new(cond),
            body,
            line: kw.line,
        })
    }

    fn parse_branch_body(&mut self) -> Result<Vec<KtStmt>, ParseError> {
        if self.cur.peek().is_punct("{") {
            let (stmts, _) = self.parse_block()?;
            Ok(stmts)
        } else {
            match self.parse_statement()? {
                Some(stmt) => Ok(vec![stmt]),
                None => Ok(Vec::new()),
            }
        }
    }

    fn parse_lambda(&mut self) -> Result<KtExpr, ParseError> {
        let open = self.cur.expect_punct("{")?;
        let params = self.try_parse_lambda_params()?;
        let mut stmts = Vec::new();
        loop {
            if self.cur.peek().is_punct("}") {
                self.cur.advance();
                break;
            }
            if self.cur.at_eof() {
                return Err(ParseError::new(
                    self.cur.path,
                    open.line,
                    open.col,
                    "unclosed lambda",
                ));
            }
            if self.cur.eat_punct(";") {
                continue;
            }
            if let Some(stmt) = self.parse_statement()? {
                stmts.push(stmt);
            }
        }
        Ok(KtExpr::Lambda(KtLambda {
            params,
            stmts,
            line: open.line,
        }))
    }

    /// Detects and consumes an explicit lambda parameter list
    /// (`a, b: T ->`); leaves the cursor untouched when there is none.
    fn try_parse_lambda_params(&mut self) -> Result<Vec<(String, Option<KtTypeName>)>, ParseError> {
        let mut probe = 0usize;
        loop {
            if self.cur.peek_at(probe).kind != TokenKind::Ident {
                return Ok(Vec::new());
            }
            probe += 1;
            if self.cur.peek_at(probe).is_punct(":") {
                probe += 1;
                if self.cur.peek_at(probe).kind != TokenKind::Ident {
                    return Ok(Vec::new());
                }
                probe += 1;
                while self.cur.peek_at(probe).is_punct(".")
                    && self.cur.peek_at(probe + 1).kind == TokenKind::Ident
                {
                    probe += 2;
                }
            }
            if self.cur.peek_at(probe).is_punct(",") {
                probe += 1;
                continue;
            }
            if self.cur.peek_at(probe).is_punct("->") {
                break;
            }
            return Ok(Vec::new());
        }
        // Confirmed: consume for real.
        let mut params = Vec::new();
        loop {
            let name = self.cur.expect_ident()?.text;
            let ty = if self.cur.eat_punct(":") {
                Some(self.parse_type_name()?)
            } else {
                None
            };
            params.push((name, ty));
            if !self.cur.eat_punct(",") {
                break;
            }
        }
        self.cur.expect_punct("->")?;
        Ok(params)
    }
}

/// Trailing lambdas attach only to call-shaped expressions.
fn callable_position(expr: &KtExpr) -> bool {
    matches!(
        expr,
        KtExpr::Name { .. } | KtExpr::Nav { .. } | KtExpr::Call { .. }
    )
}
