"use strict";
// Shapes of the query service's JSON responses.
Object.defineProperty(exports, "__esModule", { value: true });
