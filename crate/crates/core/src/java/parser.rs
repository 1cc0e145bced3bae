//! Recursive-descent parser for the Java-style subset.

use crate::java::ast::*;
use crate::lexer::{ParseError, TokenCursor, TokenKind};
use crate::model::Diagnostic;

const MODIFIERS: [&str; 12] = [
    "public",
    "private",
    "protected",
    "static",
    "final",
    "abstract",
    "synchronized",
    "native",
    "transient",
    "volatile",
    "strictfp",
    "default",
];

/// (parameters, optional body, end line) of a method or constructor.
type MethodTail = (Vec<JParam>, Option<Vec<JStmt>>, u32);

const BINARY_OPS: [&str; 15] = [
    "+", "-", "*", "/", "%", "<", ">", "<=", ">=", "==", "!=", "&&", "||", "&", "|",
];

pub fn parse_java(source: &str, path: &str) -> Result<(JFile, Vec<Diagnostic>), ParseError> {
    let mut parser = JParser {
        cur: TokenCursor::new(source, path)?,
        diagnostics: Vec::new(),
    };
    let file = parser.parse_file()?;
    Ok((file, parser.diagnostics))
}

struct JParser<'a> {
    cur: TokenCursor<'a>,
    diagnostics: Vec<Diagnostic>,
}

impl<'a> JParser<'a> {
    fn diag(&mut self, line: u32, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic {
            path: self.cur.path.to_string(),
            line,
            message: message.into(),
        });
    }

    fn parse_file(&mut self) -> Result<JFile, ParseError> {
        let mut file = JFile {
            package: None,
            imports: Vec::new(),
            types: Vec::new(),
            end_line: 1,
        };
        if self.cur.peek().is_ident("package") {
            self.cur.advance();
            file.package = Some(self.parse_dotted()?);
            self.cur.eat_punct(";");
        }
        while self.cur.peek().is_ident("import") {
            let line = self.cur.advance().line;
            let is_static = self.cur.eat_ident("static");
            let (path, wildcard) = self.parse_import_path()?;
            file.imports.push(JImport {
                path,
                is_static,
                wildcard,
                line,
            });
            self.cur.eat_punct(";");
        }
        while !self.cur.at_eof() {
            if let Some(ty) = self.parse_type_decl()? {
                file.types.push(ty);
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

    /// Annotation uses; `@interface` declarations are left untouched.
    fn parse_annotations(&mut self) -> Result<Vec<JAnnotation>, ParseError> {
        let mut annotations = Vec::new();
        while self.cur.peek().is_punct("@") && !self.cur.peek_at(1).is_ident("interface") {
            let line = self.cur.advance().line;
            let name = self.parse_dotted()?;
            if self.cur.peek().is_punct("(") {
                self.skip_group("(", ")")?;
            }
            annotations.push(JAnnotation { name, line });
        }
        Ok(annotations)
    }

    fn parse_modifiers(&mut self) {
        while self.cur.peek().kind == TokenKind::Ident
            && MODIFIERS.contains(&self.cur.peek().text.as_str())
        {
            self.cur.advance();
        }
    }

    fn parse_type_decl(&mut self) -> Result<Option<JType>, ParseError> {
        let annotations = self.parse_annotations()?;
        self.parse_modifiers();
        let t = self.cur.peek().clone();
        if t.is_punct("@") && self.cur.peek_at(1).is_ident("interface") {
            self.cur.advance();
            self.cur.advance();
            let name_tok = self.cur.expect_ident()?;
            let end_line = self.skip_group("{", "}")?;
            return Ok(Some(JType {
                name: name_tok.text,
                kind: JTypeKind::Annotation,
                annotations,
                extends: Vec::new(),
                implements: Vec::new(),
                members: Vec::new(),
                line: t.line,
                end_line,
            }));
        }
        let kind = match t.text.as_str() {
            "class" => JTypeKind::Class,
            "interface" => JTypeKind::Interface,
            "enum" => JTypeKind::Enum,
            _ => {
                self.diag(
                    t.line,
                    format!("skipped unrecognized top-level construct at `{}`", t.text),
                );
                self.cur.skip_balanced()?;
                return Ok(None);
            }
        };
        self.cur.advance();
        let name_tok = self.cur.expect_ident()?;
        let mut ty = JType {
            name: name_tok.text,
            kind,
            annotations,
            extends: Vec::new(),
            implements: Vec::new(),
            members: Vec::new(),
            line: t.line,
            end_line: name_tok.line,
        };
        if self.cur.peek().is_ident("extends") {
            self.cur.advance();
            loop {
                let line = self.cur.peek().line;
                let name = self.parse_dotted()?;
                ty.extends.push(JTypeName { name, line });
                if !self.cur.eat_punct(",") {
                    break;
                }
            }
        }
        if self.cur.peek().is_ident("implements") {
            self.cur.advance();
            loop {
                let line = self.cur.peek().line;
                let name = self.parse_dotted()?;
                ty.implements.push(JTypeName { name, line });
                if !self.cur.eat_punct(",") {
                    break;
                }
            }
        }
        let open = self.cur.expect_punct("{")?;
        if kind == JTypeKind::Enum {
            self.parse_enum_constants(&mut ty)?;
        }
        while !self.cur.peek().is_punct("}") {
            if self.cur.at_eof() {
                return Err(ParseError::new(
                    self.cur.path,
                    open.line,
                    open.col,
                    format!("unclosed body of `{}`", ty.name),
                ));
            }
            if self.cur.eat_punct(";") {
                continue;
            }
            let class_name = ty.name.clone();
            if let Some(member) = self.parse_member(&class_name)? {
                ty.members.push(member);
            }
        }
        ty.end_line = self.cur.advance().line;
        Ok(Some(ty))
    }

    fn parse_enum_constants(&mut self, ty: &mut JType) -> Result<(), ParseError> {
        loop {
            let t = self.cur.peek().clone();
            if t.is_punct("}") || t.is_punct(";") || t.kind == TokenKind::Eof {
                self.cur.eat_punct(";");
                return Ok(());
            }
            if t.kind == TokenKind::Ident {
                self.cur.advance();
                if self.cur.peek().is_punct("(") {
                    self.skip_group("(", ")")?;
                }
                ty.members.push(JMember::EnumConstant {
                    name: t.text,
                    line: t.line,
                });
                if !self.cur.eat_punct(",") {
                    self.cur.eat_punct(";");
                    return Ok(());
                }
            } else {
                self.diag(t.line, "skipped unrecognized enum constant");
                self.cur.skip_balanced()?;
            }
        }
    }

    fn parse_member(&mut self, class_name: &str) -> Result<Option<JMember>, ParseError> {
        let annotations = self.parse_annotations()?;
        self.parse_modifiers();
        let t = self.cur.peek().clone();
        if t.kind != TokenKind::Ident {
            self.diag(
                t.line,
                format!("skipped unrecognized member at `{}`", t.text),
            );
            self.cur.skip_balanced()?;
            return Ok(None);
        }
        if matches!(t.text.as_str(), "class" | "interface" | "enum") {
            self.diag(t.line, "skipped nested type declaration");
            self.cur.skip_balanced()?;
            return Ok(None);
        }
        // Constructor: the class name directly followed by `(`.
        if t.text == class_name && self.cur.peek_at(1).is_punct("(") {
            let name_tok = self.cur.advance();
            let (params, body, end_line) = self.parse_method_tail()?;
            return Ok(Some(JMember::Method(JMethod {
                name: name_tok.text,
                return_type: None,
                params,
                body,
                annotations,
                is_constructor: true,
                line: name_tok.line,
                end_line,
            })));
        }
        let ty = self.parse_type_name()?;
        let name_tok = self.cur.expect_ident()?;
        if self.cur.peek().is_punct("(") {
            let (params, body, end_line) = self.parse_method_tail()?;
            return Ok(Some(JMember::Method(JMethod {
                name: name_tok.text,
                return_type: Some(ty),
                params,
                body,
                annotations,
                is_constructor: false,
                line: name_tok.line,
                end_line,
            })));
        }
        // Field, possibly with more declarators; only the first keeps the
        // initializer expression analyzed.
        let init = if self.cur.eat_punct("=") {
            Some(self.parse_expr()?)
        } else {
            None
        };
        let field = JField {
            name: name_tok.text,
            ty: ty.clone(),
            init,
            annotations,
            line: name_tok.line,
        };
        while self.cur.eat_punct(",") {
            let extra = self.cur.expect_ident()?;
            self.diag(
                extra.line,
                format!(
                    "extra declarator `{}` shares the first field's type",
                    extra.text
                ),
            );
            if self.cur.eat_punct("=") {
                let _ = self.parse_expr()?;
            }
        }
        self.cur.eat_punct(";");
        Ok(Some(JMember::Field(field)))
    }

    fn parse_method_tail(&mut self) -> Result<MethodTail, ParseError> {
        self.cur.expect_punct("(")?;
        let mut params = Vec::new();
        while !self.cur.peek().is_punct(")") && !self.cur.at_eof() {
            let _ = self.parse_annotations()?;
            self.parse_modifiers();
            let ty = self.parse_type_name()?;
            let name_tok = self.cur.expect_ident()?;
            params.push(JParam {
                name: name_tok.text,
                ty,
                line: name_tok.line,
            });
            if !self.cur.eat_punct(",") {
                break;
            }
        }
        self.cur.expect_punct(")")?;
        if self.cur.eat_ident("throws") {
            loop {
                let _ = self.parse_dotted()?;
                if !self.cur.eat_punct(",") {
                    break;
                }
            }
        }
        if self.cur.peek().is_punct("{") {
            let (stmts, end_line) = self.parse_block()?;
            Ok((params, Some(stmts), end_line))
        } else {
            let end_line = self.cur.peek().line;
            self.cur.eat_punct(";");
            Ok((params, None, end_line))
        }
    }

    /// Type occurrence: primitive or dotted name, with array suffixes
    /// folded into the raw text.
    fn parse_type_name(&mut self) -> Result<JTypeName, ParseError> {
        let line = self.cur.peek().line;
        let mut name = self.parse_dotted()?;
        while self.cur.peek().is_punct("[") && self.cur.peek_at(1).is_punct("]") {
            self.cur.advance();
            self.cur.advance();
            name.push_str("[]");
        }
        Ok(JTypeName { name, line })
    }

    fn parse_block(&mut self) -> Result<(Vec<JStmt>, u32), ParseError> {
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

    fn parse_statement(&mut self) -> Result<Option<JStmt>, ParseError> {
        let t = self.cur.peek().clone();
        if t.kind == TokenKind::Ident {
            match t.text.as_str() {
                "return" => {
                    self.cur.advance();
                    let value = if self.cur.peek().is_punct(";") || self.cur.peek().is_punct("}") {
                        None
                    } else {
                        Some(self.parse_expr()?)
                    };
                    self.cur.eat_punct(";");
                    return Ok(Some(JStmt::Return {
                        value,
                        line: t.line,
                    }));
                }
                "if" => {
                    let expr = self.parse_if()?;
                    return Ok(Some(JStmt::Expr(expr)));
                }
                "while" => {
                    let expr = self.parse_while()?;
                    return Ok(Some(JStmt::Expr(expr)));
                }
                "for" | "try" | "switch" | "do" | "throw" | "synchronized" => {
                    self.diag(t.line, format!("skipped `{}` statement", t.text));
                    self.cur.skip_balanced()?;
                    return Ok(None);
                }
                "break" | "continue" => {
                    self.cur.advance();
                    self.cur.eat_punct(";");
                    return Ok(None);
                }
                _ => {}
            }
            if self.local_decl_ahead() {
                let ty = self.parse_type_name()?;
                let name_tok = self.cur.expect_ident()?;
                let init = if self.cur.eat_punct("=") {
                    Some(self.parse_expr()?)
                } else {
                    None
                };
                self.cur.eat_punct(";");
                return Ok(Some(JStmt::Local {
                    name: name_tok.text,
                    ty,
                    init,
                    line: t.line,
                }));
            }
        }
        let expr = self.parse_expr()?;
        self.cur.eat_punct(";");
        Ok(Some(JStmt::Expr(expr)))
    }

    /// True when the upcoming tokens look like `Type name ...`.
    fn local_decl_ahead(&self) -> bool {
        if self.cur.peek().kind != TokenKind::Ident {
            return false;
        }
        let mut probe = 1usize;
        while self.cur.peek_at(probe).is_punct(".")
            && self.cur.peek_at(probe + 1).kind == TokenKind::Ident
        {
            probe += 2;
        }
        while self.cur.peek_at(probe).is_punct("[") && self.cur.peek_at(probe + 1).is_punct("]") {
            probe += 2;
        }
        self.cur.peek_at(probe).kind == TokenKind::Ident
            && !matches!(self.cur.peek_at(probe).text.as_str(), "instanceof")
    }

    fn parse_if(&mut self) -> Result<JExpr, ParseError> {
        let kw = self.cur.advance();
        self.cur.expect_punct("(")?;
        let cond = self.parse_expr()?;
        self.cur.expect_punct(")")?;
        let then_stmts = self.parse_branch_body()?;
        let else_stmts = if self.cur.peek().is_ident("else") {
            self.cur.advance();
            if self.cur.peek().is_ident("if") {
                let nested = self.parse_if()?;
                vec![JStmt::Expr(nested)]
            } else {
                self.parse_branch_body()?
            }
        } else {
            Vec::new()
        };
        Ok(JExpr::If {
            cond: Box::new(cond),
            then_stmts,
            else_stmts,
            line: kw.line,
        })
    }

    fn parse_while(&mut self) -> Result<JExpr, ParseError> {
        let kw = self.cur.advance();
        self.cur.expect_punct("(")?;
        let cond = self.parse_expr()?;
        self.cur.expect_punct(")")?;
        let body = self.parse_branch_body()?;
        Ok(JExpr::While {
            cond: Box::new(cond),
            body,
            line: kw.line,
        })
    }

    fn parse_branch_body(&mut self) -> Result<Vec<JStmt>, ParseError> {
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

    fn parse_expr(&mut self) -> Result<JExpr, ParseError> {
        let first = self.parse_binary_chain()?;
        if self.cur.peek().is_punct("=") {
            let line = self.cur.advance().line;
            let value = self.parse_expr()?;
            return Ok(JExpr::Assign {
                target: Box::new(first),
                value: Box::new(value),
                line,
            });
        }
        Ok(first)
    }

    fn parse_binary_chain(&mut self) -> Result<JExpr, ParseError> {
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
        Ok(JExpr::OpChain { operands, line })
    }

    fn is_binary_op_next(&self) -> bool {
        let t = self.cur.peek();
        t.kind == TokenKind::Punct && BINARY_OPS.contains(&t.text.as_str())
    }

    fn parse_postfix(&mut self) -> Result<JExpr, ParseError> {
        let mut expr = self.parse_primary()?;
        loop {
            let t = self.cur.peek().clone();
            if t.is_punct(".") && self.cur.peek_at(1).kind == TokenKind::Ident {
                self.cur.advance();
                let name_tok = self.cur.advance();
                expr = JExpr::Nav {
                    recv: Box::new(expr),
                    name: name_tok.text,
                    line: name_tok.line,
                };
                continue;
            }
            if t.is_punct("(") {
                self.cur.advance();
                let mut args = Vec::new();
                while !self.cur.peek().is_punct(")") && !self.cur.at_eof() {
                    args.push(self.parse_expr()?);
                    if !self.cur.eat_punct(",") {
                        break;
                    }
                }
                self.cur.expect_punct(")")?;
                expr = JExpr::Call {
                    callee: Box::new(expr),
                    args,
                    line: t.line,
                };
                continue;
            }
            break;
        }
        Ok(expr)
    }

    fn parse_primary(&mut self) -> Result<JExpr, ParseError> {
        let t = self.cur.peek().clone();
        match t.kind {
            TokenKind::Int => {
                self.cur.advance();
                Ok(JExpr::Lit {
                    kind: JLitKind::Int,
                    line: t.line,
                })
            }
            TokenKind::Long => {
                self.cur.advance();
                Ok(JExpr::Lit {
                    kind: JLitKind::Long,
                    line: t.line,
                })
            }
            TokenKind::Double => {
                self.cur.advance();
                Ok(JExpr::Lit {
                    kind: JLitKind::Double,
                    line: t.line,
                })
            }
            TokenKind::Float => {
                self.cur.advance();
                Ok(JExpr::Lit {
                    kind: JLitKind::Float,
                    line: t.line,
                })
            }
            TokenKind::Str => {
                self.cur.advance();
                Ok(JExpr::Lit {
                    kind: JLitKind::Str,
                    line: t.line,
                })
            }
            TokenKind::Char => {
                self.cur.advance();
                Ok(JExpr::Lit {
                    kind: JLitKind::Char,
                    line: t.line,
                })
            }
            TokenKind::Ident => match t.text.as_str() {
                "true" | "false" => {
                    self.cur.advance();
                    Ok(JExpr::Lit {
                        kind: JLitKind::Boolean,
                        line: t.line,
                    })
                }
                "null" => {
                    self.cur.advance();
                    Ok(JExpr::Lit {
                        kind: JLitKind::Null,
                        line: t.line,
                    })
                }
                "new" => {
                    self.cur.advance();
                    let type_name = self.parse_dotted()?;
                    self.cur.expect_punct("(")?;
                    let mut args = Vec::new();
                    while !self.cur.peek().is_punct(")") && !self.cur.at_eof() {
                        args.push(self.parse_expr()?);
                        if !self.cur.eat_punct(",") {
                            break;
                        }
                    }
                    self.cur.expect_punct(")")?;
                    Ok(JExpr::New {
                        type_name,
                        args,
                        line: t.line,
                    })
                }
                "this" | "super" => {
                    self.cur.advance();
                    Ok(JExpr::Unknown { line: t.line })
                }
                _ => {
                    self.cur.advance();
                    Ok(JExpr::Name {
                        name: t.text,
                        line: t.line,
                    })
                }
            },
            TokenKind::Punct => match t.text.as_str() {
                "(" => {
                    if let Some(probe) = self.cast_ahead() {
                        self.cur.advance();
                        let line = self.cur.peek().line;
                        let mut name = String::new();
                        for _ in 0..probe {
                            let seg = self.cur.advance();
                            name.push_str(&seg.text);
                        }
                        self.cur.expect_punct(")")?;
                        let value = self.parse_postfix()?;
                        return Ok(JExpr::Cast {
                            ty: JTypeName { name, line },
                            value: Box::new(value),
                            line: t.line,
                        });
                    }
                    self.cur.advance();
                    let inner = self.parse_expr()?;
                    self.cur.expect_punct(")")?;
                    Ok(inner)
                }
                "!" | "-" | "+" => {
                    self.cur.advance();
                    let operand = self.parse_postfix()?;
                    Ok(JExpr::OpChain {
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
                    Ok(JExpr::Unknown { line: t.line })
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

    /// Number of tokens spanned by a cast's type name, when `( Type )`
    /// is followed by something an operand can start with.
    fn cast_ahead(&self) -> Option<usize> {
        if !self.cur.peek().is_punct("(") {
            return None;
        }
        if self.cur.peek_at(1).kind != TokenKind::Ident {
            return None;
        }
        let mut probe = 2usize;
        while self.cur.peek_at(probe).is_punct(".")
            && self.cur.peek_at(probe + 1).kind == TokenKind::Ident
        {
            probe += 2;
        }
        if !self.cur.peek_at(probe).is_punct(")") {
            return None;
        }
        let after = self.cur.peek_at(probe + 1);
        let starts_operand = matches!(
            after.kind,
            TokenKind::Ident | TokenKind::Str | TokenKind::Char
        ) || matches!(
            after.kind,
            TokenKind::Int | TokenKind::Long | TokenKind::Double | TokenKind::Float
        ) || after.is_punct("(");
        if starts_operand && !after.is_ident("instanceof") {
            Some(probe - 1)
        } else {
            None
        }
    }

    /// Skips a bracketed group wholesale; returns the closing line.
    fn skip_group(&mut self, open: &str, close: &str) -> Result<u32, ParseError> {
        let open_tok = self.cur.expect_punct(open)?;
        let mut depth = 1i32;
        loop {
            let t = self.cur.advance();
            match t.kind {
                TokenKind::Eof => {
                    return Err(ParseError::new(
                        self.cur.path,
                        open_tok.line,
                        open_tok.col,
                        "unbalanced delimiters",
                    ))
                }
                TokenKind::Punct if t.text == open => depth += 1,
                TokenKind::Punct if t.text == close => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(t.line);
                    }
                }
                _ => {}
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_ok(src: &str) -> JFile {
        parse_java(src, "Test.java").unwrap().0
    }

    #[test]
    fn empty_file_yields_empty_ast() {
        let file = parse_ok("");
        assert!(file.types.is_empty());
    }

    #[test]
    fn static_method_with_cross_language_parameter() {
        let file = parse_ok(
            "public class FooJava {\n    public static void func(BarKotlin bar) {\n        System.out.println(bar.getX());\n    }\n}",
        );
        let ty = &file.types[0];
        assert_eq!(ty.name, "FooJava");
        let JMember::Method(m) = &ty.members[0] else {
            panic!()
        };
        assert_eq!(m.name, "func");
        assert_eq!(m.params[0].ty.name, "BarKotlin");
        assert_eq!(m.return_type.as_ref().unwrap().name, "void");
        assert!(m.body.is_some());
    }

    #[test]
    fn extends_and_implements_raw_refs() {
        let file = parse_ok("class A extends B implements C {}");
        let ty = &file.types[0];
        assert_eq!(ty.extends[0].name, "B");
        assert_eq!(ty.implements[0].name, "C");
    }

    #[test]
    fn field_and_local_declarations() {
        let file = parse_ok(
            "class T {\n    int count;\n    void m() {\n        Object raw = null;\n    }\n}",
        );
        let ty = &file.types[0];
        let JMember::Field(f) = &ty.members[0] else {
            panic!()
        };
        assert_eq!(f.ty.name, "int");
        let JMember::Method(m) = &ty.members[1] else {
            panic!()
        };
        let JStmt::Local { name, ty: lty, .. } = &m.body.as_ref().unwrap()[0] else {
            panic!()
        };
        assert_eq!(name, "raw");
        assert_eq!(lty.name, "Object");
    }

    #[test]
    fn cast_expression_is_disambiguated_from_parens() {
        let file = parse_ok(
            "class T {\n    void m() {\n        Codec codec = (Codec) raw;\n        int x = (1);\n    }\n}",
        );
        let JMember::Method(m) = &file.types[0].members[0] else {
            panic!()
        };
        let body = m.body.as_ref().unwrap();
        let JStmt::Local {
            init: Some(JExpr::Cast { ty, .. }),
            ..
        } = &body[0]
        else {
            panic!("expected cast")
        };
        assert_eq!(ty.name, "Codec");
        let JStmt::Local {
            init: Some(JExpr::Lit { .. }),
            ..
        } = &body[1]
        else {
            panic!("expected parenthesized literal")
        };
    }

    #[test]
    fn enum_constants_and_annotation_decl() {
        let file = parse_ok("public enum Mode {\n    FAST,\n    SLOW\n}\n@interface Grade {\n}");
        let ty = &file.types[0];
        assert_eq!(ty.kind, JTypeKind::Enum);
        assert_eq!(ty.members.len(), 2);
        assert_eq!(file.types[1].kind, JTypeKind::Annotation);
        assert_eq!(file.types[1].name, "Grade");
    }

    #[test]
    fn static_import_parses() {
        let file = parse_ok("import static lib.Util.helper;\nclass T {}");
        assert!(file.imports[0].is_static);
        assert_eq!(file.imports[0].path, "lib.Util.helper");
    }

    #[test]
    fn unbalanced_body_is_a_parse_error() {
        assert!(parse_java("class T {\n    void m() {\n", "T.java").is_err());
    }

    #[test]
    fn assignment_statement_parses() {
        let file = parse_ok(
            "class T {\n    int unit;\n    void reset() {\n        unit = null;\n    }\n}",
        );
        let JMember::Method(m) = &file.types[0].members[1] else {
            panic!()
        };
        let JStmt::Expr(JExpr::Assign { .. }) = &m.body.as_ref().unwrap()[0] else {
            panic!("expected assignment")
        };
    }
}
