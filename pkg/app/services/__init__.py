# Services package: request-level wrappers shared by the CLI and the HTTP routes.
